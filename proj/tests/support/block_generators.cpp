#include "block_generators.hpp"

#include <algorithm>

namespace agentblocks::testing {

using blocks::Block;
using blocks::BlockIndex;
using blocks::BlockProgram;
using lang::ArithExpr;
using lang::ArithOp;
using lang::BodyStep;
using lang::Literal;
using lang::LogicExpr;
using lang::Operand;
using lang::Plan;
using lang::RelOp;
using lang::Term;

namespace {

using Vars = std::vector<std::string>;

class Gen {
 public:
  explicit Gen(std::mt19937& rng) : rng_(rng) {}

  BlockCase run() {
    BlockCase c;
    bp_.agent_name = "agent_" + std::to_string(uniform(0, 99));
    c.expected.name = bp_.agent_name;
    const int tops = uniform(0, 3);
    for (int t = 0; t < tops; ++t) {
      // A chain of initialization blocks or a single plan.
      if (chance(0.5)) {
        std::optional<BlockIndex> prev;
        for (int k = uniform(1, 3); k > 0; --k) {
          const BlockIndex b = init(c.expected);
          if (prev) bp_.blocks[*prev].next = b;
          else bp_.top_blocks.push_back(b);
          prev = b;
        }
      } else {
        bp_.top_blocks.push_back(plan(c.expected));
      }
    }
    c.program = std::move(bp_);
    return c;
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  BlockIndex add(std::string type) {
    Block b;
    b.id = "b" + std::to_string(next_id_++);
    b.type = std::move(type);
    return bp_.add(std::move(b));
  }
  Block& at(BlockIndex i) { return bp_.blocks[i]; }

  std::pair<BlockIndex, Term> value(int depth, const Vars& vars) {
    const int hi = depth <= 0 ? 4 : 6;
    switch (uniform(0, hi)) {
      case 0: {
        auto [b, l] = literal(depth, vars);
        return {b, l.to_term()};
      }
      case 1: {
        static const std::vector<std::string> kTexts = {"", "hello", "a \"quoted\" word", "back\\slash", "{\"on\":true}", "\xc3\xa9t\xc3\xa9"};
        const BlockIndex b = add("string");
        const std::string s = pick(kTexts);
        at(b).fields["TEXT"] = s;
        return {b, Term::string(s)};
      }
      case 2: {
        const BlockIndex b = add("number");
        const double d = chance(0.7) ? uniform(-50, 5000) : uniform(-999, 999) / 8.0;
        if (chance(0.3)) at(b).fields["NUM"] = lang_number_text(d);
        else at(b).fields["NUM"] = d;
        return {b, Term::number(d)};
      }
      case 3: {
        const BlockIndex b = add("boolean");
        const bool v = chance(0.5);
        at(b).fields["BOOL"] = std::string(v ? "TRUE" : "FALSE");
        return {b, Term::atom(v ? "true" : "false")};
      }
      case 4: {
        if (vars.empty()) return value(depth, vars);
        const BlockIndex b = add("variable");
        const std::string v = pick(vars);
        at(b).fields["VAR"] = v;
        return {b, Term::variable(v)};
      }
      case 5:
        return {add("empty_list"), Term::list({})};
      default: {
        const int n = uniform(1, 3);
        std::vector<Term> items;
        const BlockIndex first = add("list_cons");
        BlockIndex cur = first;
        for (int k = 0; k < n; ++k) {
          auto [h, t] = value(depth - 1, vars);
          at(cur).inputs["HEAD"] = h;
          items.push_back(t);
          const BlockIndex tail = add(k + 1 < n ? "list_cons" : "empty_list");
          at(cur).inputs["TAIL"] = tail;
          cur = tail;
        }
        return {first, Term::list(std::move(items))};
      }
    }
  }

  static std::string lang_number_text(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }

  std::pair<BlockIndex, Literal> literal(int depth, const Vars& vars) {
    static const std::vector<std::string> kNames = {"note", "start", "pong", "lamp_on", "seen", "count2", "true"};
    const BlockIndex b = add("atom");
    const std::string name = pick(kNames);
    at(b).fields["NAME"] = name;
    const int n = depth <= 0 ? 0 : uniform(0, 3);
    std::vector<Term> args;
    for (int k = 0; k < n; ++k) {
      auto [c, t] = value(depth - 1, vars);
      at(b).inputs["ARG" + std::to_string(k)] = c;
      args.push_back(std::move(t));
    }
    if (n > 0 || chance(0.3)) at(b).mutation["argCount"] = std::to_string(n);
    return {b, Literal(name, std::move(args))};
  }

  std::pair<BlockIndex, ArithExpr> arith(int depth, const Vars& vars) {
    if (depth <= 0 || chance(0.4)) {
      if (!vars.empty() && chance(0.5)) {
        const BlockIndex b = add("variable");
        const std::string v = pick(vars);
        at(b).fields["VAR"] = v;
        return {b, ArithExpr::variable(v)};
      }
      const BlockIndex b = add("number");
      const double d = uniform(0, 100);
      at(b).fields["NUM"] = d;
      return {b, ArithExpr::constant(d)};
    }
    return binop(depth, vars);
  }

  std::pair<BlockIndex, ArithExpr> binop(int depth, const Vars& vars) {
    static const std::vector<std::pair<std::string, ArithOp>> kOps = {
        {"ADD", ArithOp::kAdd}, {"SUB", ArithOp::kSub}, {"MUL", ArithOp::kMul}, {"DIV", ArithOp::kDiv}};
    const auto& [name, op] = pick(kOps);
    const BlockIndex b = add("arith_binop");
    at(b).fields["OP"] = name;
    auto [l, le] = arith(depth - 1, vars);
    auto [r, re] = arith(depth - 1, vars);
    at(b).inputs["A"] = l;
    at(b).inputs["B"] = r;
    return {b, ArithExpr::binary(op, std::move(le), std::move(re))};
  }

  std::pair<BlockIndex, Operand> operand(const Vars& vars) {
    if (chance(0.3)) {
      auto [b, e] = binop(2, vars);
      return {b, Operand(std::move(e))};
    }
    auto [b, t] = value(1, vars);
    return {b, Operand(std::move(t))};
  }

  std::pair<BlockIndex, LogicExpr> logic(int depth, const Vars& vars) {
    const int hi = depth <= 0 ? 2 : 5;
    switch (uniform(0, hi)) {
      case 0: {
        auto [b, l] = literal(1, vars);
        return {b, LogicExpr::literal(std::move(l))};
      }
      case 1: {
        const BlockIndex b = add("boolean");
        const bool v = chance(0.5);
        at(b).fields["BOOL"] = std::string(v ? "TRUE" : "FALSE");
        return {b, LogicExpr::literal(Literal(v ? "true" : "false"))};
      }
      case 2: {
        static const std::vector<std::pair<std::string, RelOp>> kOps = {
            {"EQ", RelOp::kEq},      {"NEQ", RelOp::kNotEq},     {"LT", RelOp::kLess},   {"LTE", RelOp::kLessEq},
            {"GT", RelOp::kGreater}, {"GTE", RelOp::kGreaterEq}, {"UNIFY", RelOp::kUnify}};
        const auto& [name, op] = pick(kOps);
        const BlockIndex b = add("compare");
        at(b).fields["OP"] = name;
        auto [l, lo] = operand(vars);
        auto [r, ro] = operand(vars);
        at(b).inputs["A"] = l;
        at(b).inputs["B"] = r;
        return {b, LogicExpr::relation(op, std::move(lo), std::move(ro))};
      }
      case 3:
      case 4: {
        const bool conj = uniform(3, 4) == 3;
        const BlockIndex b = add(conj ? "and" : "or");
        auto [l, le] = logic(depth - 1, vars);
        auto [r, re] = logic(depth - 1, vars);
        at(b).inputs["A"] = l;
        at(b).inputs["B"] = r;
        return {b, conj ? LogicExpr::conjunction(std::move(le), std::move(re))
                        : LogicExpr::disjunction(std::move(le), std::move(re))};
      }
      default: {
        const BlockIndex b = add("not");
        auto [inner, e] = logic(depth - 1, vars);
        at(b).inputs["A"] = inner;
        if (bp_.blocks[inner].type == "atom") {
          Literal l = e.lit();
          l.negated = true;
          return {b, LogicExpr::literal(std::move(l))};
        }
        return {b, LogicExpr::negation(std::move(e))};
      }
    }
  }

  BlockIndex init(lang::AgentProgram& out) {
    static const Vars kAll = {"X", "Y", "Who"};
    switch (uniform(0, 2)) {
      case 0: {
        const BlockIndex b = add("initial_belief");
        auto [l, lit] = literal(2, {});
        at(b).inputs["BELIEF"] = l;
        out.initial_beliefs.push_back(std::move(lit));
        return b;
      }
      case 1: {
        const BlockIndex b = add("initial_goal");
        auto [l, lit] = literal(1, kAll);
        at(b).inputs["GOAL"] = l;
        out.initial_goals.push_back(std::move(lit));
        return b;
      }
      default: {
        const BlockIndex b = add("rule");
        auto [h, head] = literal(1, kAll);
        auto [c, cond] = logic(2, kAll);
        at(b).inputs["HEAD"] = h;
        at(b).inputs["CONDITION"] = c;
        out.rules.push_back(lang::Rule{std::move(head), std::move(cond), {}});
        return b;
      }
    }
  }

  void bind(Vars& bound, const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
  }

  BlockIndex variable_block(const std::string& v) {
    const BlockIndex b = add("variable");
    at(b).fields["VAR"] = v;
    return b;
  }

  BlockIndex plan(lang::AgentProgram& out) {
    static const Vars kAll = {"X", "Y", "W", "Msg"};
    static const std::vector<std::pair<std::string, lang::TriggerKind>> kTriggers = {
        {"believes", lang::TriggerKind::kBeliefAdded},
        {"stops_believing", lang::TriggerKind::kBeliefRemoved},
        {"wants", lang::TriggerKind::kGoalAdded}};
    const BlockIndex b = add("plan");
    Plan p;
    const auto& [tname, tkind] = pick(kTriggers);
    at(b).fields["TRIGGER"] = tname;
    p.trigger.kind = tkind;
    auto [ev, event] = literal(1, kAll);
    at(b).inputs["EVENT"] = ev;
    p.trigger.pattern = event;
    if (chance(0.6)) {
      auto [c, ctx] = logic(2, kAll);
      at(b).inputs["CONTEXT"] = c;
      p.context = ctx;
    }
    Vars bound;
    p.trigger.pattern.collect_variables(bound);
    if (p.context) p.context->collect_binding_variables(bound);

    std::optional<BlockIndex> prev;
    auto link = [&](BlockIndex s) {
      if (prev) at(*prev).next = s;
      else at(b).inputs["BODY"] = s;
      prev = s;
    };
    for (int k = uniform(0, 4); k > 0; --k) {
      const Vars use = bound;
      switch (uniform(0, 8)) {
        case 0:
        case 1: {
          const bool add_b = uniform(0, 1) == 0;
          const BlockIndex s = add(add_b ? "add_belief" : "remove_belief");
          auto [l, lit] = literal(1, use);
          at(s).inputs["BELIEF"] = l;
          p.body.push_back(add_b ? BodyStep::add_belief(lit) : BodyStep::remove_belief(lit));
          link(s);
          break;
        }
        case 2: {
          const BlockIndex s = add("achieve_subgoal");
          auto [l, lit] = literal(1, kAll);
          at(s).inputs["GOAL"] = l;
          lit.collect_variables(bound);
          p.body.push_back(BodyStep::achieve(lit));
          link(s);
          break;
        }
        case 3: {
          const bool print = chance(0.5);
          const BlockIndex s = add(print ? "print" : "wait_ms");
          auto [v, t] = value(1, use);
          at(s).inputs[print ? "MESSAGE" : "MS"] = v;
          p.body.push_back(BodyStep::internal(print ? "print" : "wait", {t}));
          link(s);
          break;
        }
        case 4: {
          const BlockIndex s = add("json_get");
          auto [d, dt] = value(0, use);
          auto [pa, pt] = value(0, use);
          const std::string outv = pick(kAll);
          at(s).inputs["DOC"] = d;
          at(s).inputs["PATH"] = pa;
          at(s).inputs["OUT"] = variable_block(outv);
          p.body.push_back(BodyStep::internal("json_get", {dt, pt, Term::variable(outv)}));
          bind(bound, outv);
          link(s);
          break;
        }
        case 5: {
          const BlockIndex s = add("json_build");
          const int n = uniform(0, 2);
          std::vector<Term> args;
          for (int q = 0; q < n; ++q) {
            auto [kb, kt] = value(0, use);
            auto [vb, vt] = value(0, use);
            at(s).inputs["KEY" + std::to_string(q)] = kb;
            at(s).inputs["VALUE" + std::to_string(q)] = vb;
            args.push_back(kt);
            args.push_back(vt);
          }
          at(s).mutation["pairCount"] = std::to_string(n);
          const std::string outv = pick(kAll);
          at(s).inputs["OUT"] = variable_block(outv);
          args.push_back(Term::variable(outv));
          p.body.push_back(BodyStep::internal("json_build", args));
          bind(bound, outv);
          link(s);
          break;
        }
        case 6: {
          const bool tell = chance(0.5);
          const BlockIndex s = add(tell ? "send_tell" : "send_achieve");
          auto [r, rt] = value(0, use);
          auto [l, lit] = literal(1, use);
          at(s).inputs["RECEIVER"] = r;
          at(s).inputs[tell ? "BELIEF" : "GOAL"] = l;
          p.body.push_back(BodyStep::internal("send", {rt, Term::atom(tell ? "tell" : "achieve"), lit.to_term()}));
          link(s);
          break;
        }
        case 7: {
          const BlockIndex s = add("wot:readproperty:urn:dev:lamp/on");
          const std::string outv = pick(kAll);
          at(s).mutation = {{"href", "http://127.0.0.1:8080/lamp/properties/on"},
                            {"httpMethod", "GET"},
                            {"affordanceKind", "readproperty"},
                            {"thingId", "urn:dev:lamp"}};
          at(s).inputs["OUT"] = variable_block(outv);
          p.body.push_back(BodyStep::environment(
              "wot:readproperty", {Term::string("http://127.0.0.1:8080/lamp/properties/on"), Term::string("GET"),
                                   Term::variable(outv)}));
          bind(bound, outv);
          link(s);
          break;
        }
        default: {
          const BlockIndex s = add("wot:writeproperty:urn:dev:lamp/level");
          auto [v, t] = value(0, use);
          at(s).mutation = {{"href", "http://127.0.0.1:8080/lamp/properties/level"},
                            {"httpMethod", "PUT"},
                            {"affordanceKind", "writeproperty"},
                            {"thingId", "urn:dev:lamp"}};
          at(s).inputs["VALUE"] = v;
          p.body.push_back(BodyStep::environment(
              "wot:writeproperty",
              {Term::string("http://127.0.0.1:8080/lamp/properties/level"), Term::string("PUT"), t}));
          link(s);
          break;
        }
      }
    }
    out.plans.push_back(std::move(p));
    return b;
  }

  std::mt19937& rng_;
  BlockProgram bp_;
  int next_id_ = 0;
};

}  // namespace

BlockCase random_block_case(std::mt19937& rng) { return Gen(rng).run(); }

}  // namespace agentblocks::testing
