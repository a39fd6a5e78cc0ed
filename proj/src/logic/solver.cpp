#include "agentblocks/logic/solver.hpp"

#include <cmath>

#include "agentblocks/lang/printer.hpp"

namespace agentblocks::logic {

using lang::Operand;
using lang::RelOp;
using lang::Term;

double eval_arith(const ArithExpr& e, const Substitution& s) {
  switch (e.kind()) {
    case ArithExpr::Kind::kConst:
      return e.value();
    case ArithExpr::Kind::kVariable: {
      const Term* bound = s.find(e.variable_name());
      if (!bound) throw QueryError("unbound variable " + e.variable_name() + " in arithmetic");
      const Term v = lang::apply(s, *bound);
      if (v.is_variable()) throw QueryError("unbound variable " + e.variable_name() + " in arithmetic");
      if (!v.is_number())
        throw QueryError("variable " + e.variable_name() + " is bound to non-number " + lang::to_source(v));
      return v.number();
    }
    case ArithExpr::Kind::kBinary: {
      const double l = eval_arith(e.lhs(), s);
      const double r = eval_arith(e.rhs(), s);
      switch (e.op()) {
        case lang::ArithOp::kAdd: return l + r;
        case lang::ArithOp::kSub: return l - r;
        case lang::ArithOp::kMul: return l * r;
        case lang::ArithOp::kDiv:
          if (r == 0.0) throw QueryError("division by zero");
          return l / r;
      }
    }
  }
  throw QueryError("malformed arithmetic expression");
}

namespace {

Term operand_value(const Operand& o, const Substitution& s) {
  if (const auto* a = std::get_if<ArithExpr>(&o)) return Term::number(eval_arith(*a, s));
  return lang::apply(s, std::get<Term>(o));
}

double numeric_side(const Operand& o, const Substitution& s) {
  const Term v = operand_value(o, s);
  if (v.is_variable()) throw QueryError("unbound variable " + v.name() + " in comparison");
  if (!v.is_number()) throw QueryError("comparison of non-number " + lang::to_source(v));
  return v.number();
}

Substitution renaming(const std::vector<std::string>& vars, unsigned long id) {
  Substitution r;
  for (const auto& v : vars) r.bind(v, Term::variable(v + "#" + std::to_string(id)));
  return r;
}

}  // namespace

bool Solver::solve(const LogicExpr& query, const Substitution& seed, const SolutionSink& sink) {
  std::vector<std::string> visible;
  query.collect_variables(visible);
  for (const auto& [v, t] : seed.bindings()) visible.push_back(v);
  return solve_expr(query, seed, 0, [&](const Substitution& s) {
    return sink(QuerySolution{s.restricted_to(visible)});
  });
}

std::optional<QuerySolution> Solver::first(const LogicExpr& query, const Substitution& seed) {
  std::optional<QuerySolution> out;
  solve(query, seed, [&out](const QuerySolution& q) {
    out = q;
    return false;
  });
  return out;
}

std::vector<QuerySolution> Solver::all(const LogicExpr& query, const Substitution& seed) {
  std::vector<QuerySolution> out;
  solve(query, seed, [&out](const QuerySolution& q) {
    out.push_back(q);
    return true;
  });
  return out;
}

bool Solver::solve_expr(const LogicExpr& e, const Substitution& s, int depth, const Continuation& k) {
  switch (e.kind()) {
    case LogicExpr::Kind::kLiteral:
      if (e.lit().negated) {
        Literal positive = e.lit();
        positive.negated = false;
        return solve_negation(LogicExpr::literal(std::move(positive)), s, depth, k);
      }
      return solve_literal(e.lit(), s, depth, k);
    case LogicExpr::Kind::kNot:
      return solve_negation(e.operand(), s, depth, k);
    case LogicExpr::Kind::kAnd:
      return solve_expr(e.left(), s, depth,
                        [&](const Substitution& s1) { return solve_expr(e.right(), s1, depth, k); });
    case LogicExpr::Kind::kOr:
      if (!solve_expr(e.left(), s, depth, k)) return false;
      return solve_expr(e.right(), s, depth, k);
    case LogicExpr::Kind::kRelation:
      return solve_relation(e, s, k);
  }
  return true;
}

bool Solver::solve_literal(const Literal& l, const Substitution& s, int depth, const Continuation& k) {
  if (l.args.empty() && l.functor == "true") return k(s);
  if (l.args.empty() && l.functor == "false") return true;

  const Literal goal = lang::apply(s, l);
  for (const Literal& fact : bb_.facts()) {
    if (fact.functor != goal.functor || fact.args.size() != goal.args.size()) continue;
    if (auto s1 = lang::unify(goal, fact, s)) {
      if (!k(*s1)) return false;
    }
  }
  for (const Rule& rule : bb_.rules()) {
    if (rule.head.functor != goal.functor || rule.head.args.size() != goal.args.size()) continue;
    if (depth + 1 > options_.max_depth)
      throw QueryError("rule recursion deeper than " + std::to_string(options_.max_depth) + " while proving " +
                       goal.functor);
    std::vector<std::string> vars;
    rule.head.collect_variables(vars);
    rule.body.collect_variables(vars);
    const Substitution fresh = renaming(vars, ++fresh_);
    const Literal head = lang::apply(fresh, rule.head);
    if (auto s1 = lang::unify(goal, head, s)) {
      const LogicExpr body = lang::apply(fresh, rule.body);
      if (!solve_expr(body, *s1, depth + 1, k)) return false;
    }
  }
  return true;
}

bool Solver::solve_negation(const LogicExpr& inner, const Substitution& s, int depth, const Continuation& k) {
  const LogicExpr grounded = lang::apply(s, inner);
  std::vector<std::string> vars;
  grounded.collect_variables(vars);
  if (!vars.empty())
    throw QueryError("negation over non-ground goal " + lang::to_source(grounded) + " (floundering)");
  bool found = false;
  solve_expr(grounded, s, depth, [&found](const Substitution&) {
    found = true;
    return false;
  });
  return found ? true : k(s);
}

bool Solver::solve_relation(const LogicExpr& e, const Substitution& s, const Continuation& k) {
  switch (e.rel_op()) {
    case RelOp::kUnify: {
      Substitution s1 = s;
      if (!lang::unify_into(operand_value(e.rel_lhs(), s), operand_value(e.rel_rhs(), s), s1)) return true;
      return k(s1);
    }
    case RelOp::kEq:
    case RelOp::kNotEq: {
      const bool equal = operand_value(e.rel_lhs(), s) == operand_value(e.rel_rhs(), s);
      return equal == (e.rel_op() == RelOp::kEq) ? k(s) : true;
    }
    default: {
      const double l = numeric_side(e.rel_lhs(), s);
      const double r = numeric_side(e.rel_rhs(), s);
      bool holds = false;
      switch (e.rel_op()) {
        case RelOp::kLess: holds = l < r; break;
        case RelOp::kLessEq: holds = l <= r; break;
        case RelOp::kGreater: holds = l > r; break;
        case RelOp::kGreaterEq: holds = l >= r; break;
        default: break;
      }
      return holds ? k(s) : true;
    }
  }
}

}  // namespace agentblocks::logic
