#include <gtest/gtest.h>

#include <random>

#include "agentblocks/lang/parser.hpp"
#include "agentblocks/lang/printer.hpp"
#include "agentblocks/lang/substitution.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace agentblocks::lang {
namespace {

using testing::Assignment;

Term A(const char* n) { return Term::atom(n); }
Term V(const char* n) { return Term::variable(n); }
Term S(const char* f, std::vector<Term> args) { return Term::structure(f, std::move(args)); }

TEST(Unify, BindsSingleVariable) {
  auto s = unify(S("ping", {V("X")}), S("ping", {A("agent2")}));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->size(), 1u);
  EXPECT_EQ(*s->find("X"), A("agent2"));
}

TEST(Unify, GroundIdenticalTermsGiveEmptySubstitution) {
  auto s = unify(S("note", {Term::number(5)}), S("note", {Term::number(5)}));
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->empty());
}

TEST(Unify, RepeatedVariableAgainstDistinctConstantsFails) {
  const Term lhs = S("f", {V("X"), V("X")});
  const Term rhs = S("f", {A("a"), A("b")});
  // Oracle: no assignment of X over {a, b} makes the terms equal.
  EXPECT_TRUE(testing::brute_force_unifiers(lhs, rhs, {A("a"), A("b")}).empty());
  EXPECT_FALSE(unify(lhs, rhs));
}

TEST(Unify, OccursCheckRejectsCyclicBinding) {
  EXPECT_FALSE(unify(V("X"), S("f", {V("X")})));
  EXPECT_FALSE(unify(S("g", {V("X"), V("Y")}), S("g", {V("Y"), S("f", {V("X")})})));
}

TEST(Unify, ExtendsSeed) {
  Substitution seed;
  seed.bind("Y", A("b"));
  auto s = unify(S("p", {V("X"), V("Y")}), S("p", {A("a"), A("b")}), seed);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s->find("Y"), A("b"));
  EXPECT_EQ(*s->find("X"), A("a"));
  EXPECT_FALSE(unify(S("p", {V("Y")}), S("p", {A("c")}), seed));
}

TEST(Unify, LiteralsRespectNegationAndArity) {
  Literal a("p", {V("X")});
  Literal b("p", {A("a")});
  EXPECT_TRUE(unify(a, b));
  b.negated = true;
  EXPECT_FALSE(unify(a, b));
  EXPECT_FALSE(unify(Literal("p", {V("X")}), Literal("p", {V("X"), V("Y")})));
}

TEST(Unify, NumbersCompareByValueAndKindsMustMatch) {
  EXPECT_TRUE(unify(Term::number(0.0), Term::number(-0.0)));
  EXPECT_FALSE(unify(Term::string("a"), A("a")));
  EXPECT_FALSE(unify(Term::list({A("a")}), S("a", {A("a")})));
}

// Soundness and most-generality against brute-force ground unifiers over a
// finite Herbrand universe (3 constants, 3 variables, f/1 and g/2).
TEST(UnifyProperty, MostGeneralOnFiniteFragment) {
  std::vector<Term> universe = {A("a"), A("b"), A("c")};
  for (const char* c : {"a", "b", "c"}) universe.push_back(S("f", {A(c)}));
  for (const char* c : {"a", "b", "c"})
    for (const char* d : {"a", "b", "c"}) universe.push_back(S("g", {A(c), A(d)}));

  std::mt19937 rng(1234);
  int unifiable = 0;
  for (int iter = 0; iter < 400; ++iter) {
    const Term a = testing::random_small_term(rng, 2);
    const Term b = testing::random_small_term(rng, 2);
    const auto mgu = unify(a, b);
    const auto ground = testing::brute_force_unifiers(a, b, universe);
    std::vector<std::string> vars;
    a.collect_variables(vars);
    b.collect_variables(vars);

    if (mgu) {
      ++unifiable;
      ASSERT_EQ(apply(*mgu, a), apply(*mgu, b)) << to_source(a) << " ~ " << to_source(b);
    }
    for (const Assignment& g : ground) {
      ASSERT_TRUE(mgu) << to_source(a) << " ~ " << to_source(b);
      // g is an instance of the mgu: g(mgu(X)) == g(X) for every variable.
      for (const auto& v : vars) {
        const Term via_mgu = testing::ground_term(apply(*mgu, Term::variable(v)), g);
        ASSERT_EQ(via_mgu, g.at(v)) << v << " in " << to_source(a) << " ~ " << to_source(b);
      }
    }
    if (mgu && ground.empty()) {
      // Only acceptable when every grounding of the mgu leaves the universe.
      Assignment all_a;
      for (const auto& v : vars) all_a[v] = A("a");
      bool inside = true;
      for (const auto& v : vars) {
        const Term t = testing::ground_term(apply(*mgu, Term::variable(v)), all_a);
        inside = inside && std::find(universe.begin(), universe.end(), t) != universe.end();
      }
      ASSERT_FALSE(inside) << to_source(a) << " ~ " << to_source(b);
    }
  }
  EXPECT_GT(unifiable, 40);
}

TEST(Apply, ReplacesBoundVariablesOnly) {
  Substitution s;
  s.bind("X", A("a"));
  EXPECT_EQ(apply(s, S("ping", {V("X")})), S("ping", {A("a")}));
  EXPECT_EQ(apply(s, S("f", {V("Y")})), S("f", {V("Y")}));
  const Term t = S("f", {V("X"), Term::list({V("Z")})});
  EXPECT_EQ(apply(Substitution{}, t), t);
}

TEST(Apply, ResolvesChainsAndIsIdempotent) {
  Substitution s;
  s.bind("X", V("Y"));
  s.bind("Y", S("g", {V("Z"), A("b")}));
  s.bind("Z", Term::number(3));
  const Term once = apply(s, S("p", {V("X")}));
  EXPECT_EQ(once, S("p", {S("g", {Term::number(3), A("b")})}));
  EXPECT_EQ(apply(s, once), once);
}

TEST(Apply, GroundTermUnchanged) {
  Substitution s;
  s.bind("X", A("a"));
  const Term t = S("note", {Term::number(1000), Term::string("x")});
  EXPECT_EQ(apply(s, t), t);
}

TEST(Parser, BeliefAndGoal) {
  const AgentProgram p = parse_agent("note(1000). !start.");
  ASSERT_EQ(p.initial_beliefs.size(), 1u);
  EXPECT_EQ(p.initial_beliefs[0], Literal("note", {Term::number(1000)}));
  ASSERT_EQ(p.initial_goals.size(), 1u);
  EXPECT_EQ(p.initial_goals[0], Literal("start"));
  EXPECT_TRUE(p.plans.empty());
  EXPECT_TRUE(p.rules.empty());
}

TEST(Parser, PingPlan) {
  const AgentProgram p =
      parse_agent("+!start : note(W) <- .wait(W); .send(pong_agent, achieve, pong).");
  ASSERT_EQ(p.plans.size(), 1u);
  const Plan& plan = p.plans[0];
  EXPECT_EQ(plan.trigger.kind, TriggerKind::kGoalAdded);
  EXPECT_EQ(plan.trigger.pattern, Literal("start"));
  ASSERT_TRUE(plan.context);
  EXPECT_EQ(*plan.context, LogicExpr::literal(Literal("note", {V("W")})));
  ASSERT_EQ(plan.body.size(), 2u);
  EXPECT_EQ(plan.body[0], BodyStep::internal("wait", {V("W")}));
  EXPECT_EQ(plan.body[1], BodyStep::internal("send", {A("pong_agent"), A("achieve"), A("pong")}));
}

TEST(Parser, UnclosedParenthesisIsSyntaxError) {
  try {
    parse_agent("+!g <- a(.");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 10);
    EXPECT_EQ(e.expected(), std::vector<std::string>{"term"});
  }
}

TEST(Parser, ReportsLineAndColumn) {
  try {
    parse_agent("note(1).\n\n+!g <- .print(\"x\")\n  foo.");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 3);
    EXPECT_EQ(e.expected(), (std::vector<std::string>{";", "."}));
  }
}

TEST(Parser, SemanticErrors) {
  EXPECT_THROW(parse_agent("note(X)."), SemanticError);
  EXPECT_THROW(parse_agent("+!g <- .print(X)."), SemanticError);
  EXPECT_NO_THROW(parse_agent("+!g <- .json_get(\"{}\", \"a\", X); .print(X)."));
  EXPECT_NO_THROW(parse_agent("+!g(X) <- .print(X)."));
  EXPECT_THROW(parse_agent("+!g : not p(X) <- .print(X)."), SemanticError);
}

TEST(Parser, RejectsExcludedSyntax) {
  EXPECT_THROW(parse_agent("-!g <- .print(\"x\")."), ParseError);
  EXPECT_THROW(parse_agent("note(\"a\\n\")."), ParseError);
  EXPECT_THROW(parse_agent("@label +!g."), ParseError);
  EXPECT_THROW(parse_agent("~p."), ParseError);
}

TEST(Parser, ContextOperatorsAndPrecedence) {
  const LogicExpr e = parse_logic_expr("a | b & not c");
  ASSERT_EQ(e.kind(), LogicExpr::Kind::kOr);
  EXPECT_EQ(e.right().kind(), LogicExpr::Kind::kAnd);
  EXPECT_TRUE(e.right().right().lit().negated);

  const LogicExpr rel = parse_logic_expr("(X + 1) * 2 >= Y");
  ASSERT_EQ(rel.kind(), LogicExpr::Kind::kRelation);
  EXPECT_EQ(rel.rel_op(), RelOp::kGreaterEq);
  EXPECT_TRUE(std::holds_alternative<ArithExpr>(rel.rel_lhs()));
  EXPECT_EQ(std::get<Term>(rel.rel_rhs()), V("Y"));

  const LogicExpr grouped = parse_logic_expr("(a & b) | X \\== 3");
  ASSERT_EQ(grouped.kind(), LogicExpr::Kind::kOr);
  EXPECT_EQ(grouped.left().kind(), LogicExpr::Kind::kAnd);
  EXPECT_EQ(grouped.right().rel_op(), RelOp::kNotEq);

  EXPECT_EQ(parse_logic_expr("not (a & b)").kind(), LogicExpr::Kind::kNot);
}

TEST(Parser, ArithmeticPrecedenceAndAssociativity) {
  EXPECT_EQ(to_source(parse_arith_expr("2+3*4")), "2 + 3 * 4");
  EXPECT_EQ(to_source(parse_arith_expr("(2+3)*4")), "(2 + 3) * 4");
  EXPECT_EQ(to_source(parse_arith_expr("8-(2-1)")), "8 - (2 - 1)");
  EXPECT_EQ(to_source(parse_arith_expr("8-2-1")), "8 - 2 - 1");
  EXPECT_EQ(to_source(parse_arith_expr("X - -3")), "X - -3");
}

TEST(Parser, TermsAndComments) {
  EXPECT_EQ(parse_term("[a, \"s\\\"q\", -2.5, f(X)]"),
            Term::list({A("a"), Term::string("s\"q"), Term::number(-2.5), S("f", {V("X")})}));
  const AgentProgram p = parse_agent("// one\nnote(1). /* two\n three */ !go.");
  EXPECT_EQ(p.initial_beliefs.size(), 1u);
  EXPECT_EQ(p.initial_goals.size(), 1u);
}

TEST(Parser, EnvironmentActionNamespace) {
  const AgentProgram p = parse_agent("+!g <- wot::readproperty(\"http://h/on\", \"GET\", V); turn_on.");
  ASSERT_EQ(p.plans[0].body.size(), 2u);
  EXPECT_EQ(p.plans[0].body[0].kind, BodyStep::Kind::kEnvironmentAction);
  EXPECT_EQ(p.plans[0].body[0].action, "wot:readproperty");
  EXPECT_EQ(p.plans[0].body[1].action, "turn_on");
}

TEST(Printer, SingleBelief) {
  AgentProgram p;
  p.initial_beliefs.push_back(Literal("note", {Term::number(1000)}));
  EXPECT_EQ(print_agent(p), "note(1000).\n");
}

TEST(Printer, EmptyProgram) { EXPECT_EQ(print_agent(AgentProgram{}), ""); }

TEST(Printer, PlanWithoutContextOmitsTrue) {
  AgentProgram p;
  Plan plan;
  plan.trigger = {TriggerKind::kGoalAdded, Literal("start")};
  plan.body.push_back(BodyStep::internal("print", {Term::string("hi")}));
  p.plans.push_back(plan);
  EXPECT_EQ(print_agent(p), "+!start <- .print(\"hi\").\n");
  EXPECT_EQ(parse_agent(print_agent(p)), p);
}

TEST(Printer, CanonicalPingAgent) {
  const std::string src =
      "note(1000).\n"
      "\n"
      "!start.\n"
      "\n"
      "+!start : note(W) <- .wait(W); .send(pong_agent, achieve, pong).\n";
  EXPECT_EQ(print_agent(parse_agent(src)), src);
}

TEST(Printer, Numbers) {
  EXPECT_EQ(format_number(1000), "1000");
  EXPECT_EQ(format_number(-3), "-3");
  EXPECT_EQ(format_number(2.5), "2.5");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e21), "1000000000000000000000");
  EXPECT_EQ(parse_term(format_number(1e-7)), Term::number(1e-7));
}

TEST(RoundTrip, RandomPrograms) {
  std::mt19937 rng(42);
  for (int i = 0; i < 300; ++i) {
    const AgentProgram p = testing::random_program(rng);
    const std::string text = print_agent(p);
    AgentProgram back;
    ASSERT_NO_THROW(back = parse_agent(text)) << text;
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(print_agent(back), text);
  }
}

TEST(Ast, UnboundBodyVariables) {
  const AgentProgram p = parse_agent("+!g(X) : b(Y) <- !sub(Z); .print(X, Y, Z).");
  EXPECT_TRUE(unbound_body_variables(p.plans[0]).empty());
  Plan bad = p.plans[0];
  bad.body.insert(bad.body.begin(), BodyStep::add_belief(Literal("m", {V("Q")})));
  EXPECT_EQ(unbound_body_variables(bad), std::vector<std::string>{"Q"});
}

}  // namespace
}  // namespace agentblocks::lang
