#pragma once

#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "agentblocks/lang/ast.hpp"

namespace agentblocks::logic {

using lang::Literal;
using lang::Rule;

struct LiteralHash {
  std::size_t operator()(const Literal& l) const noexcept;
};

/// Ground facts with set semantics (kept in insertion order) plus the
/// agent's deductive rules, in source order.
class BeliefBase {
 public:
  BeliefBase() = default;
  explicit BeliefBase(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  // Returns false when the fact was already present. Throws
  // std::invalid_argument for non-ground or negated literals.
  bool add(const Literal& fact);
  // Returns false when the fact was absent.
  bool remove(const Literal& fact);
  bool contains(const Literal& fact) const { return index_.count(fact) != 0; }

  const std::vector<Literal>& facts() const { return facts_; }
  const std::vector<Rule>& rules() const { return rules_; }
  void add_rule(Rule r) { rules_.push_back(std::move(r)); }

 private:
  std::vector<Literal> facts_;
  std::unordered_set<Literal, LiteralHash> index_;
  std::vector<Rule> rules_;
};

}  // namespace agentblocks::logic
