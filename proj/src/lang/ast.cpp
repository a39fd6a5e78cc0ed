#include "agentblocks/lang/ast.hpp"

#include <algorithm>

namespace agentblocks::lang {

namespace {
void add_unique(std::vector<std::string>& out, const std::string& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void collect_operand(const Operand& o, std::vector<std::string>& out) {
  std::visit([&out](const auto& side) { side.collect_variables(out); }, o);
}

bool contains(const std::vector<std::string>& vs, const std::string& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}
}  // namespace

std::optional<Literal> Literal::from_term(const Term& t) {
  if (t.is_atom()) return Literal(t.name());
  if (t.is_structure()) return Literal(t.name(), t.children());
  return std::nullopt;
}

bool Literal::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

void Literal::collect_variables(std::vector<std::string>& out) const {
  for (const Term& t : args) t.collect_variables(out);
}

ArithExpr ArithExpr::constant(double v) {
  ArithExpr e;
  e.kind_ = Kind::kConst;
  e.value_ = v;
  return e;
}

ArithExpr ArithExpr::variable(std::string name) {
  ArithExpr e;
  e.kind_ = Kind::kVariable;
  e.var_ = std::move(name);
  return e;
}

ArithExpr ArithExpr::binary(ArithOp op, ArithExpr lhs, ArithExpr rhs) {
  ArithExpr e;
  e.kind_ = Kind::kBinary;
  e.op_ = op;
  e.operands_.push_back(std::move(lhs));
  e.operands_.push_back(std::move(rhs));
  return e;
}

void ArithExpr::collect_variables(std::vector<std::string>& out) const {
  if (kind_ == Kind::kVariable) add_unique(out, var_);
  for (const ArithExpr& o : operands_) o.collect_variables(out);
}

LogicExpr LogicExpr::literal(Literal l) {
  LogicExpr e;
  e.kind_ = Kind::kLiteral;
  e.literal_ = std::move(l);
  return e;
}

LogicExpr LogicExpr::negation(LogicExpr inner) {
  LogicExpr e;
  e.kind_ = Kind::kNot;
  e.children_.push_back(std::move(inner));
  return e;
}

LogicExpr LogicExpr::conjunction(LogicExpr a, LogicExpr b) {
  LogicExpr e;
  e.kind_ = Kind::kAnd;
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

LogicExpr LogicExpr::disjunction(LogicExpr a, LogicExpr b) {
  LogicExpr e;
  e.kind_ = Kind::kOr;
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

LogicExpr LogicExpr::relation(RelOp op, Operand lhs, Operand rhs) {
  LogicExpr e;
  e.kind_ = Kind::kRelation;
  e.rel_op_ = op;
  e.sides_.push_back(std::move(lhs));
  e.sides_.push_back(std::move(rhs));
  return e;
}

void LogicExpr::collect_variables(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::kLiteral:
      literal_.collect_variables(out);
      break;
    case Kind::kRelation:
      for (const Operand& o : sides_) collect_operand(o, out);
      break;
    default:
      for (const LogicExpr& c : children_) c.collect_variables(out);
  }
}

void LogicExpr::collect_binding_variables(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::kLiteral:
      if (!literal_.negated) literal_.collect_variables(out);
      break;
    case Kind::kNot:
      break;
    case Kind::kAnd:
      children_[0].collect_binding_variables(out);
      children_[1].collect_binding_variables(out);
      break;
    case Kind::kOr: {
      // Only variables bound on both branches are guaranteed.
      std::vector<std::string> l, r;
      children_[0].collect_binding_variables(l);
      children_[1].collect_binding_variables(r);
      for (const auto& v : l)
        if (contains(r, v)) add_unique(out, v);
      break;
    }
    case Kind::kRelation:
      // `=` may bind either side; comparisons bind nothing.
      if (rel_op_ == RelOp::kUnify)
        for (const Operand& o : sides_) collect_operand(o, out);
      break;
  }
}

std::string_view to_string(RelOp op) {
  switch (op) {
    case RelOp::kEq: return "==";
    case RelOp::kNotEq: return "\\==";
    case RelOp::kLess: return "<";
    case RelOp::kLessEq: return "<=";
    case RelOp::kGreater: return ">";
    case RelOp::kGreaterEq: return ">=";
    case RelOp::kUnify: return "=";
  }
  return "?";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::kAdd: return "+";
    case ArithOp::kSub: return "-";
    case ArithOp::kMul: return "*";
    case ArithOp::kDiv: return "/";
  }
  return "?";
}

std::vector<std::string> variables_bound_by(const BodyStep& step) {
  std::vector<std::string> out;
  switch (step.kind) {
    case BodyStep::Kind::kAchieve:
      // A subgoal may bind its arguments through the plan that handles it.
      step.literal.collect_variables(out);
      break;
    case BodyStep::Kind::kInternalAction:
      if ((step.action == "json_get" || step.action == "json_build") && !step.args.empty())
        step.args.back().collect_variables(out);
      break;
    case BodyStep::Kind::kEnvironmentAction:
      if (step.action == "wot:readproperty" && step.args.size() >= 3)
        step.args[2].collect_variables(out);
      else if (step.action == "wot:invokeaction" && step.args.size() >= 4)
        step.args[3].collect_variables(out);
      break;
    default:
      break;
  }
  return out;
}

std::vector<std::string> unbound_body_variables(const Plan& plan) {
  std::vector<std::string> bound;
  plan.trigger.pattern.collect_variables(bound);
  if (plan.context) plan.context->collect_binding_variables(bound);

  std::vector<std::string> unbound;
  for (const BodyStep& step : plan.body) {
    std::vector<std::string> used;
    step.literal.collect_variables(used);
    for (const Term& t : step.args) t.collect_variables(used);
    const std::vector<std::string> binds = variables_bound_by(step);
    for (const auto& v : used) {
      if (!contains(bound, v) && !contains(binds, v)) add_unique(unbound, v);
    }
    for (const auto& v : binds) add_unique(bound, v);
  }
  return unbound;
}

}  // namespace agentblocks::lang
