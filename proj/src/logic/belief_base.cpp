#include "agentblocks/logic/belief_base.hpp"

#include <algorithm>
#include <functional>

namespace agentblocks::logic {

std::size_t LiteralHash::operator()(const Literal& l) const noexcept {
  std::size_t h = std::hash<std::string>{}(l.functor) ^ (l.negated ? 0x5bd1e995 : 0);
  for (const auto& a : l.args) h = h * 31 + lang::hash_value(a);
  return h;
}

bool BeliefBase::add(const Literal& fact) {
  if (fact.negated) throw std::invalid_argument("negated literal in belief base: " + fact.functor);
  if (!fact.is_ground()) throw std::invalid_argument("non-ground belief: " + fact.functor);
  if (!index_.insert(fact).second) return false;
  facts_.push_back(fact);
  return true;
}

bool BeliefBase::remove(const Literal& fact) {
  if (index_.erase(fact) == 0) return false;
  facts_.erase(std::find(facts_.begin(), facts_.end(), fact));
  return true;
}

}  // namespace agentblocks::logic
