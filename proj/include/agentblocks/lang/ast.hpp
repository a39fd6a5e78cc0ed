#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agentblocks/lang/term.hpp"

namespace agentblocks::lang {

// Diagnostic metadata only; never participates in structural equality.
struct SourceLocation {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourceLocation&, const SourceLocation&) { return true; }
};

struct Literal {
  std::string functor;
  std::vector<Term> args;
  // Default negation; only meaningful inside plan contexts and rule bodies.
  bool negated = false;
  SourceLocation loc;

  Literal() = default;
  Literal(std::string f, std::vector<Term> a = {}, bool neg = false)
      : functor(std::move(f)), args(std::move(a)), negated(neg) {}

  Term to_term() const { return Term::structure(functor, args); }
  // Atom or structure terms only.
  static std::optional<Literal> from_term(const Term& t);

  bool is_ground() const;
  void collect_variables(std::vector<std::string>& out) const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class ArithOp { kAdd, kSub, kMul, kDiv };

class ArithExpr {
 public:
  enum class Kind { kConst, kVariable, kBinary };

  static ArithExpr constant(double v);
  static ArithExpr variable(std::string name);
  static ArithExpr binary(ArithOp op, ArithExpr lhs, ArithExpr rhs);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  const std::string& variable_name() const { return var_; }
  ArithOp op() const { return op_; }
  const ArithExpr& lhs() const { return operands_[0]; }
  const ArithExpr& rhs() const { return operands_[1]; }

  void collect_variables(std::vector<std::string>& out) const;

  friend bool operator==(const ArithExpr&, const ArithExpr&) = default;

 private:
  Kind kind_ = Kind::kConst;
  double value_ = 0.0;
  std::string var_;
  ArithOp op_ = ArithOp::kAdd;
  std::vector<ArithExpr> operands_;
};

// A side of a relation. Plain numbers and variables are kept as Terms;
// only genuine arithmetic (a binary operation at the top) is an ArithExpr.
using Operand = std::variant<Term, ArithExpr>;

enum class RelOp { kEq, kNotEq, kLess, kLessEq, kGreater, kGreaterEq, kUnify };

std::string_view to_string(RelOp op);
std::string_view to_string(ArithOp op);

class LogicExpr {
 public:
  enum class Kind { kLiteral, kNot, kAnd, kOr, kRelation };

  LogicExpr() = default;
  static LogicExpr literal(Literal l);
  static LogicExpr negation(LogicExpr e);
  static LogicExpr conjunction(LogicExpr a, LogicExpr b);
  static LogicExpr disjunction(LogicExpr a, LogicExpr b);
  static LogicExpr relation(RelOp op, Operand lhs, Operand rhs);

  Kind kind() const { return kind_; }
  const Literal& lit() const { return literal_; }
  const LogicExpr& operand() const { return children_[0]; }
  const LogicExpr& left() const { return children_[0]; }
  const LogicExpr& right() const { return children_[1]; }
  RelOp rel_op() const { return rel_op_; }
  const Operand& rel_lhs() const { return sides_[0]; }
  const Operand& rel_rhs() const { return sides_[1]; }

  // Every variable, including those under negation.
  void collect_variables(std::vector<std::string>& out) const;
  // Variables that a successful evaluation binds (not under negation).
  void collect_binding_variables(std::vector<std::string>& out) const;

  friend bool operator==(const LogicExpr&, const LogicExpr&) = default;

 private:
  Kind kind_ = Kind::kLiteral;
  Literal literal_;
  std::vector<LogicExpr> children_;
  RelOp rel_op_ = RelOp::kEq;
  std::vector<Operand> sides_;
};

enum class TriggerKind { kBeliefAdded, kBeliefRemoved, kGoalAdded };

struct TriggerEvent {
  TriggerKind kind = TriggerKind::kGoalAdded;
  Literal pattern;
  friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

struct BodyStep {
  enum class Kind { kAchieve, kAddBelief, kRemoveBelief, kInternalAction, kEnvironmentAction };

  Kind kind = Kind::kAchieve;
  Literal literal;           // kAchieve, kAddBelief, kRemoveBelief
  std::string action;        // internal action name or environment action id
  std::vector<Term> args;    // kInternalAction, kEnvironmentAction

  static BodyStep achieve(Literal l) { return {Kind::kAchieve, std::move(l), {}, {}}; }
  static BodyStep add_belief(Literal l) { return {Kind::kAddBelief, std::move(l), {}, {}}; }
  static BodyStep remove_belief(Literal l) { return {Kind::kRemoveBelief, std::move(l), {}, {}}; }
  static BodyStep internal(std::string name, std::vector<Term> args) {
    return {Kind::kInternalAction, {}, std::move(name), std::move(args)};
  }
  static BodyStep environment(std::string id, std::vector<Term> args) {
    return {Kind::kEnvironmentAction, {}, std::move(id), std::move(args)};
  }

  friend bool operator==(const BodyStep&, const BodyStep&) = default;
};

struct Rule {
  Literal head;
  LogicExpr body;
  SourceLocation loc;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Plan {
  TriggerEvent trigger;
  std::optional<LogicExpr> context;
  std::vector<BodyStep> body;
  SourceLocation loc;
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct AgentProgram {
  std::string name;
  std::vector<Literal> initial_beliefs;
  std::vector<Literal> initial_goals;
  std::vector<Rule> rules;
  std::vector<Plan> plans;
  friend bool operator==(const AgentProgram&, const AgentProgram&) = default;
};

// Variables a body step binds when it succeeds.
std::vector<std::string> variables_bound_by(const BodyStep& step);

// Variables used in the plan body that are neither bound by the trigger or
// context nor by an earlier step, in order of first offending use.
std::vector<std::string> unbound_body_variables(const Plan& plan);

}  // namespace agentblocks::lang
