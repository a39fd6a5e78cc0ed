#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentblocks/lang/ast.hpp"
#include "agentblocks/lang/term.hpp"

namespace agentblocks::lang {

/// Variable bindings. Bindings may reference other bound variables; `apply`
/// resolves chains fully. Acyclicity is maintained by `unify` (occurs check).
class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  Substitution() = default;
  explicit Substitution(Map bindings) : bindings_(std::move(bindings)) {}

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  bool contains(const std::string& var) const { return bindings_.count(var) != 0; }
  const Term* find(const std::string& var) const;
  void bind(std::string var, Term value) { bindings_[std::move(var)] = std::move(value); }
  const Map& bindings() const { return bindings_; }

  // Keeps only bindings of the listed variables, each fully resolved.
  Substitution restricted_to(const std::vector<std::string>& vars) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  Map bindings_;
};

Term apply(const Substitution& s, const Term& t);
Literal apply(const Substitution& s, const Literal& l);
ArithExpr apply(const Substitution& s, const ArithExpr& e);
LogicExpr apply(const Substitution& s, const LogicExpr& e);
std::vector<Term> apply(const Substitution& s, const std::vector<Term>& ts);

// Most general unifier extending `seed`, or nullopt when none exists.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& seed = {});
// Literals unify when functor, arity and negation agree and the arguments unify.
std::optional<Substitution> unify(const Literal& a, const Literal& b, const Substitution& seed = {});

// In-place variant used by the solver; on failure `s` is left partially extended.
bool unify_into(const Term& a, const Term& b, Substitution& s);

}  // namespace agentblocks::lang
