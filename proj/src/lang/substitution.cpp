#include "agentblocks/lang/substitution.hpp"

namespace agentblocks::lang {

const Term* Substitution::find(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Substitution Substitution::restricted_to(const std::vector<std::string>& vars) const {
  Substitution out;
  for (const auto& v : vars) {
    if (const Term* t = find(v)) out.bind(v, apply(*this, *t));
  }
  return out;
}

Term apply(const Substitution& s, const Term& t) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::kVariable: {
      const Term* bound = s.find(t.name());
      return bound ? apply(s, *bound) : t;
    }
    case Term::Kind::kList:
      return Term::list(apply(s, t.children()));
    case Term::Kind::kStructure:
      return Term::structure(t.name(), apply(s, t.children()));
    default:
      return t;
  }
}

std::vector<Term> apply(const Substitution& s, const std::vector<Term>& ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const Term& t : ts) out.push_back(apply(s, t));
  return out;
}

Literal apply(const Substitution& s, const Literal& l) {
  Literal out = l;
  out.args = apply(s, l.args);
  return out;
}

ArithExpr apply(const Substitution& s, const ArithExpr& e) {
  switch (e.kind()) {
    case ArithExpr::Kind::kConst:
      return e;
    case ArithExpr::Kind::kVariable: {
      const Term* bound = s.find(e.variable_name());
      if (!bound) return e;
      Term v = apply(s, *bound);
      // Non-numeric bindings stay symbolic; evaluation reports them.
      if (v.is_number()) return ArithExpr::constant(v.number());
      if (v.is_variable()) return ArithExpr::variable(v.name());
      return e;
    }
    case ArithExpr::Kind::kBinary:
      return ArithExpr::binary(e.op(), apply(s, e.lhs()), apply(s, e.rhs()));
  }
  return e;
}

namespace {
Operand apply_operand(const Substitution& s, const Operand& o) {
  return std::visit([&s](const auto& side) -> Operand { return apply(s, side); }, o);
}
}  // namespace

LogicExpr apply(const Substitution& s, const LogicExpr& e) {
  switch (e.kind()) {
    case LogicExpr::Kind::kLiteral:
      return LogicExpr::literal(apply(s, e.lit()));
    case LogicExpr::Kind::kNot:
      return LogicExpr::negation(apply(s, e.operand()));
    case LogicExpr::Kind::kAnd:
      return LogicExpr::conjunction(apply(s, e.left()), apply(s, e.right()));
    case LogicExpr::Kind::kOr:
      return LogicExpr::disjunction(apply(s, e.left()), apply(s, e.right()));
    case LogicExpr::Kind::kRelation:
      return LogicExpr::relation(e.rel_op(), apply_operand(s, e.rel_lhs()),
                                 apply_operand(s, e.rel_rhs()));
  }
  return e;
}

namespace {

const Term& deref(const Term& t, const Substitution& s) {
  const Term* cur = &t;
  while (cur->is_variable()) {
    const Term* next = s.find(cur->name());
    if (!next) break;
    cur = next;
  }
  return *cur;
}

bool occurs(const std::string& var, const Term& t, const Substitution& s) {
  const Term& d = deref(t, s);
  if (d.is_variable()) return d.name() == var;
  for (const Term& c : d.children())
    if (occurs(var, c, s)) return true;
  return false;
}

bool bind_var(const Term& var, const Term& value, Substitution& s) {
  if (value.is_variable() && value.name() == var.name()) return true;
  if (occurs(var.name(), value, s)) return false;
  s.bind(var.name(), value);
  return true;
}

}  // namespace

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  const Term x = deref(a, s);
  const Term y = deref(b, s);
  if (x.is_variable()) return bind_var(x, y, s);
  if (y.is_variable()) return bind_var(y, x, s);
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::kNumber:
      return x.number() == y.number();
    case Term::Kind::kAtom:
    case Term::Kind::kString:
      return x.name() == y.name();
    case Term::Kind::kStructure:
      if (x.name() != y.name()) return false;
      [[fallthrough]];
    case Term::Kind::kList: {
      if (x.children().size() != y.children().size()) return false;
      for (std::size_t i = 0; i < x.children().size(); ++i)
        if (!unify_into(x.children()[i], y.children()[i], s)) return false;
      return true;
    }
    case Term::Kind::kVariable:
      break;
  }
  return false;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& seed) {
  Substitution s = seed;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b, const Substitution& seed) {
  if (a.negated != b.negated || a.functor != b.functor || a.args.size() != b.args.size())
    return std::nullopt;
  Substitution s = seed;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

}  // namespace agentblocks::lang
