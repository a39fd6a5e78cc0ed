#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "agentblocks/lang/ast.hpp"
#include "agentblocks/lang/substitution.hpp"
#include "agentblocks/logic/belief_base.hpp"

namespace agentblocks::logic {

using lang::ArithExpr;
using lang::LogicExpr;
using lang::Substitution;

/// Raised for queries that cannot be decided: recursion deeper than the cap,
/// floundering negation, or arithmetic/comparison evaluation failures.
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  int max_depth = 512;
};

struct QuerySolution {
  Substitution substitution;  // restricted to the query and seed variables
};

// Return false to stop the enumeration.
using SolutionSink = std::function<bool(const QuerySolution&)>;

/// Depth-first SLD resolution with negation as failure over a belief base.
///
/// Solutions are produced in a fixed order: facts in insertion order, then
/// rules in source order, conjunctions left to right. Each rule application
/// renames the rule's variables apart.
class Solver {
 public:
  explicit Solver(const BeliefBase& bb, SolverOptions options = {}) : bb_(bb), options_(options) {}

  // Returns false when the sink stopped the enumeration early.
  bool solve(const LogicExpr& query, const Substitution& seed, const SolutionSink& sink);

  std::optional<QuerySolution> first(const LogicExpr& query, const Substitution& seed = {});
  std::vector<QuerySolution> all(const LogicExpr& query, const Substitution& seed = {});

 private:
  using Continuation = std::function<bool(const Substitution&)>;

  bool solve_expr(const LogicExpr& e, const Substitution& s, int depth, const Continuation& k);
  bool solve_literal(const Literal& l, const Substitution& s, int depth, const Continuation& k);
  bool solve_negation(const LogicExpr& inner, const Substitution& s, int depth, const Continuation& k);
  bool solve_relation(const LogicExpr& e, const Substitution& s, const Continuation& k);

  const BeliefBase& bb_;
  SolverOptions options_;
  unsigned long fresh_ = 0;
};

// Evaluates with standard precedence already encoded in the tree.
// Throws QueryError on unbound or non-numeric variables and division by zero.
double eval_arith(const ArithExpr& e, const Substitution& s);

}  // namespace agentblocks::logic
