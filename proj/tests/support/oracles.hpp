#pragma once

// Brute-force reference procedures. They deliberately avoid the library's
// unify/apply/solve so that they stay independent of the code under test.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agentblocks/lang/ast.hpp"
#include "generators.hpp"

namespace agentblocks::testing {

using Assignment = std::map<std::string, Term>;

Term ground_term(const Term& t, const Assignment& a);
Literal ground_literal(const Literal& l, const Assignment& a);

// All assignments of `vars` over `universe`, in lexicographic order.
std::vector<Assignment> enumerate_assignments(const std::vector<std::string>& vars,
                                              const std::vector<Term>& universe);

// Ground unifiers of a and b drawn from `universe`.
std::vector<Assignment> brute_force_unifiers(const Term& a, const Term& b,
                                             const std::vector<Term>& universe);

// Ground entailment for non-recursive Datalog with negation as failure.
class GroundModel {
 public:
  GroundModel(std::vector<Literal> facts, std::vector<lang::Rule> rules,
              std::vector<std::string> constants);
  bool holds(const Literal& ground) const;
  bool holds(const LogicExpr& ground) const;

 private:
  std::vector<Literal> facts_;
  std::vector<lang::Rule> rules_;
  std::vector<Term> universe_;
};

// Solution set of the query projected on its variables.
std::set<std::vector<Term>> brute_force_solutions(const DatalogInstance& d,
                                                  const std::vector<std::string>& query_vars);

struct SelectedPlan {
  std::size_t plan_index;
  Assignment bindings;  // trigger + context variables of the selected plan
};

// First (plan, solution) pair: plans in library order, solutions in
// left-to-right / fact-order depth-first order.
std::optional<SelectedPlan> brute_force_first_applicable(const PlanSelectionInstance& inst);

}  // namespace agentblocks::testing
