#include "agentblocks/lang/printer.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace agentblocks::lang {

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v)) {
    char buf[400];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_terms(const std::vector<Term>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += to_source(ts[i]);
  }
  return out;
}

int precedence(ArithOp op) { return (op == ArithOp::kAdd || op == ArithOp::kSub) ? 1 : 2; }

std::string arith(const ArithExpr& e, int parent_prec, bool right_side) {
  switch (e.kind()) {
    case ArithExpr::Kind::kConst:
      return format_number(e.value());
    case ArithExpr::Kind::kVariable:
      return e.variable_name();
    case ArithExpr::Kind::kBinary: {
      const int prec = precedence(e.op());
      std::string s = arith(e.lhs(), prec, false) + " " + std::string(to_string(e.op())) + " " +
                      arith(e.rhs(), prec, true);
      if (prec < parent_prec || (right_side && prec == parent_prec)) return "(" + s + ")";
      return s;
    }
  }
  return {};
}

std::string operand(const Operand& o) {
  return std::visit([](const auto& side) { return to_source(side); }, o);
}

int precedence(LogicExpr::Kind k) {
  switch (k) {
    case LogicExpr::Kind::kOr: return 1;
    case LogicExpr::Kind::kAnd: return 2;
    default: return 3;
  }
}

std::string logic(const LogicExpr& e, int parent_prec, bool right_side) {
  switch (e.kind()) {
    case LogicExpr::Kind::kLiteral:
      return to_source(e.lit());
    case LogicExpr::Kind::kNot:
      return "not (" + logic(e.operand(), 0, false) + ")";
    case LogicExpr::Kind::kRelation:
      return operand(e.rel_lhs()) + " " + std::string(to_string(e.rel_op())) + " " +
             operand(e.rel_rhs());
    case LogicExpr::Kind::kAnd:
    case LogicExpr::Kind::kOr: {
      const int prec = precedence(e.kind());
      const char* op = e.kind() == LogicExpr::Kind::kAnd ? " & " : " | ";
      std::string s = logic(e.left(), prec, false) + op + logic(e.right(), prec, true);
      if (prec < parent_prec || (right_side && prec == parent_prec)) return "(" + s + ")";
      return s;
    }
  }
  return {};
}

std::string call(const std::string& name, const std::vector<Term>& args) {
  if (args.empty()) return name;
  return name + "(" + join_terms(args) + ")";
}

}  // namespace

std::string to_source(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kAtom:
    case Term::Kind::kVariable:
      return t.name();
    case Term::Kind::kString:
      return quote(t.text());
    case Term::Kind::kNumber:
      return format_number(t.number());
    case Term::Kind::kList:
      return "[" + join_terms(t.children()) + "]";
    case Term::Kind::kStructure:
      return call(t.name(), t.children());
  }
  return {};
}

std::string to_source(const Literal& l) {
  return (l.negated ? "not " : "") + call(l.functor, l.args);
}

std::string to_source(const ArithExpr& e) { return arith(e, 0, false); }

std::string to_source(const LogicExpr& e) { return logic(e, 0, false); }

std::string to_source(const BodyStep& s) {
  switch (s.kind) {
    case BodyStep::Kind::kAchieve: return "!" + to_source(s.literal);
    case BodyStep::Kind::kAddBelief: return "+" + to_source(s.literal);
    case BodyStep::Kind::kRemoveBelief: return "-" + to_source(s.literal);
    case BodyStep::Kind::kInternalAction: return "." + call(s.action, s.args);
    case BodyStep::Kind::kEnvironmentAction: {
      // Namespaced ids (`wot:readproperty`) use the `ns::name` surface form.
      std::string id = s.action;
      if (auto pos = id.find(':'); pos != std::string::npos) id.replace(pos, 1, "::");
      return call(id, s.args);
    }
  }
  return {};
}

std::string to_source(const TriggerEvent& t) {
  switch (t.kind) {
    case TriggerKind::kBeliefAdded: return "+" + to_source(t.pattern);
    case TriggerKind::kBeliefRemoved: return "-" + to_source(t.pattern);
    case TriggerKind::kGoalAdded: return "+!" + to_source(t.pattern);
  }
  return {};
}

std::string to_source(const Rule& r) { return to_source(r.head) + " :- " + to_source(r.body) + "."; }

std::string to_source(const Plan& p) {
  std::string out = to_source(p.trigger);
  if (p.context) out += " : " + to_source(*p.context);
  if (!p.body.empty()) {
    out += " <- ";
    for (std::size_t i = 0; i < p.body.size(); ++i) {
      if (i) out += "; ";
      out += to_source(p.body[i]);
    }
  }
  return out + ".";
}

std::string print_agent(const AgentProgram& p) {
  std::vector<std::string> sections;
  auto section = [&sections](auto&& items, auto&& render) {
    if (items.empty()) return;
    std::string s;
    for (const auto& item : items) s += render(item) + "\n";
    sections.push_back(std::move(s));
  };
  section(p.initial_beliefs, [](const Literal& l) { return to_source(l) + "."; });
  section(p.initial_goals, [](const Literal& l) { return "!" + to_source(l) + "."; });
  section(p.rules, [](const Rule& r) { return to_source(r); });
  section(p.plans, [](const Plan& pl) { return to_source(pl); });

  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i) out += "\n";
    out += sections[i];
  }
  return out;
}

}  // namespace agentblocks::lang
