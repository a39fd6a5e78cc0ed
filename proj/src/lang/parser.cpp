#include "agentblocks/lang/parser.hpp"

#include <charconv>
#include <optional>
#include <sstream>

namespace agentblocks::lang {

namespace {

std::string describe(int line, int column, const std::vector<std::string>& expected,
                     const std::string& message) {
  std::ostringstream os;
  os << line << ":" << column << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
    os << ")";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : std::runtime_error(describe(line, column, expected, message)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

SemanticError::SemanticError(SourceLocation loc, const std::string& message)
    : std::runtime_error(describe(loc.line, loc.column, {}, message)),
      line_(loc.line),
      column_(loc.column) {}

namespace {

struct Token {
  enum class Kind { kIdent, kVar, kString, kNumber, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;

  bool is(std::string_view punct) const { return kind == Kind::kPunct && text == punct; }
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (is_lower(c)) {
        t.kind = Token::Kind::kIdent;
        t.text = identifier();
      } else if (is_upper(c) || c == '_') {
        t.kind = Token::Kind::kVar;
        t.text = identifier();
      } else if (is_digit(c)) {
        t.kind = Token::Kind::kNumber;
        t.text = number_text();
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      } else if (c == '"') {
        t.kind = Token::Kind::kString;
        t.text = string_body(t);
      } else {
        t.kind = Token::Kind::kPunct;
        t.text = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
  static bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident(char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c == '_'; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const int line = line_, col = column_;
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw ParseError(line, col, {"*/"}, "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident(src_[pos_])) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string number_text() {
    const std::size_t start = pos_;
    while (is_digit(peek())) advance();
    if (peek() == '.' && is_digit(peek(1))) {
      advance();
      while (is_digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (is_digit(peek())) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string string_body(const Token& t) {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) throw ParseError(t.line, t.column, {"\""}, "unterminated string");
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\\') {
        const char n = peek(1);
        if (n != '"' && n != '\\')
          throw ParseError(line_, column_, {"\\\"", "\\\\"}, "unsupported escape sequence");
        advance();
        out += n;
        advance();
        continue;
      }
      out += c;
      advance();
    }
  }

  std::string punct(const Token& t) {
    static constexpr std::string_view kMulti[] = {"\\==", "::", ":-", "<-", "==", "<=", ">="};
    for (std::string_view m : kMulti) {
      if (src_.substr(pos_, m.size()) == m) {
        for (std::size_t i = 0; i < m.size(); ++i) advance();
        return std::string(m);
      }
    }
    static constexpr std::string_view kSingle = "()[],.;:!+-*/&|=<>";
    const char c = src_[pos_];
    if (kSingle.find(c) == std::string_view::npos)
      throw ParseError(t.line, t.column, {}, std::string("unexpected character '") + c + "'");
    advance();
    return std::string(1, c);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const char* const kTermStart = "term";

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

  AgentProgram program(std::string name) {
    AgentProgram p;
    p.name = std::move(name);
    while (!at_end()) {
      const Token& t = cur();
      if (t.is("!")) {
        next();
        Literal goal = literal();
        goal.loc = loc(t);
        expect(".");
        p.initial_goals.push_back(std::move(goal));
      } else if (t.is("+") || t.is("-")) {
        Plan plan = this->plan();
        p.plans.push_back(std::move(plan));
      } else if (t.kind == Token::Kind::kIdent) {
        Literal head = literal();
        head.loc = loc(t);
        if (accept(":-")) {
          Rule r{std::move(head), or_expr(), loc(t)};
          expect(".");
          p.rules.push_back(std::move(r));
        } else {
          expect_one_of({".", ":-"});
          if (!head.is_ground())
            throw SemanticError(head.loc, "initial belief '" + head.functor + "' is not ground");
          p.initial_beliefs.push_back(std::move(head));
        }
      } else {
        fail({"!", "+", "-", "atom"}, "expected belief, goal, rule or plan");
      }
    }
    return p;
  }

  Term single_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Literal single_literal() {
    Literal l = literal();
    expect_end();
    return l;
  }

  LogicExpr single_logic() {
    LogicExpr e = or_expr();
    expect_end();
    return e;
  }

  ArithExpr single_arith() {
    const Token& start = cur();
    Operand o = additive();
    expect_end();
    if (auto* a = std::get_if<ArithExpr>(&o)) return *a;
    const Term& t = std::get<Term>(o);
    if (t.is_number()) return ArithExpr::constant(t.number());
    if (t.is_variable()) return ArithExpr::variable(t.name());
    throw ParseError(start.line, start.column, {"number", "variable"}, "not an arithmetic expression");
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return cur().kind == Token::Kind::kEnd; }
  void next() {
    if (!at_end()) ++pos_;
  }
  static SourceLocation loc(const Token& t) { return {t.line, t.column}; }

  bool accept(std::string_view punct) {
    if (cur().is(punct)) {
      next();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& message) const {
    const Token& t = cur();
    std::string found = t.kind == Token::Kind::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), message + ", found " + found);
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) fail({std::string(punct)}, "syntax error");
  }

  void expect_one_of(std::vector<std::string> puncts) {
    for (const auto& p : puncts)
      if (accept(p)) return;
    fail(std::move(puncts), "syntax error");
  }

  void expect_end() {
    if (!at_end()) fail({"end of input"}, "trailing input");
  }

  std::string functor_name() {
    const Token& t = cur();
    if (t.kind != Token::Kind::kIdent || is_reserved_word(t.text)) fail({"atom"}, "expected a literal");
    std::string name = t.text;
    next();
    return name;
  }

  std::vector<Term> arguments(bool allow_empty) {
    std::vector<Term> args;
    if (!accept("(")) return args;
    if (allow_empty && accept(")")) return args;
    args.push_back(term());
    while (accept(",")) args.push_back(term());
    expect_one_of({",", ")"});
    return args;
  }

  Literal literal() {
    std::string f = functor_name();
    return Literal(std::move(f), arguments(false));
  }

  Term term() {
    const Token& t = cur();
    switch (t.kind) {
      case Token::Kind::kVar:
        next();
        return Term::variable(t.text);
      case Token::Kind::kString:
        next();
        return Term::string(t.text);
      case Token::Kind::kNumber:
        next();
        return Term::number(t.number);
      case Token::Kind::kIdent: {
        std::string f = functor_name();
        return Term::structure(std::move(f), arguments(false));
      }
      case Token::Kind::kPunct:
        if (t.is("-") && peek(1).kind == Token::Kind::kNumber) {
          next();
          const double v = cur().number;
          next();
          return Term::number(-v);
        }
        if (t.is("[")) {
          next();
          std::vector<Term> items;
          if (accept("]")) return Term::list({});
          items.push_back(term());
          while (accept(",")) items.push_back(term());
          expect_one_of({",", "]"});
          return Term::list(std::move(items));
        }
        break;
      case Token::Kind::kEnd:
        break;
    }
    fail({kTermStart}, "expected a term");
  }

  // ---- arithmetic / relational operands ----

  static std::optional<ArithExpr> as_arith(const Operand& o) {
    if (auto* a = std::get_if<ArithExpr>(&o)) return *a;
    const Term& t = std::get<Term>(o);
    if (t.is_number()) return ArithExpr::constant(t.number());
    if (t.is_variable()) return ArithExpr::variable(t.name());
    return std::nullopt;
  }

  Operand combine(ArithOp op, const Operand& lhs, const Operand& rhs, const Token& at) {
    auto l = as_arith(lhs);
    auto r = as_arith(rhs);
    if (!l || !r)
      throw ParseError(at.line, at.column, {"number", "variable"},
                       "arithmetic operand must be a number or variable");
    return ArithExpr::binary(op, std::move(*l), std::move(*r));
  }

  Operand primary() {
    if (cur().is("(")) {
      next();
      Operand inner = additive();
      expect(")");
      return inner;
    }
    return term();
  }

  Operand multiplicative() {
    Operand lhs = primary();
    while (cur().is("*") || cur().is("/")) {
      const Token op = cur();
      next();
      Operand rhs = primary();
      lhs = combine(op.is("*") ? ArithOp::kMul : ArithOp::kDiv, lhs, rhs, op);
    }
    return lhs;
  }

  Operand additive() {
    Operand lhs = multiplicative();
    while (cur().is("+") || cur().is("-")) {
      const Token op = cur();
      next();
      Operand rhs = multiplicative();
      lhs = combine(op.is("+") ? ArithOp::kAdd : ArithOp::kSub, lhs, rhs, op);
    }
    return lhs;
  }

  std::optional<RelOp> rel_op() const {
    const Token& t = cur();
    if (t.kind != Token::Kind::kPunct) return std::nullopt;
    if (t.text == "==") return RelOp::kEq;
    if (t.text == "\\==") return RelOp::kNotEq;
    if (t.text == "<") return RelOp::kLess;
    if (t.text == "<=") return RelOp::kLessEq;
    if (t.text == ">") return RelOp::kGreater;
    if (t.text == ">=") return RelOp::kGreaterEq;
    if (t.text == "=") return RelOp::kUnify;
    return std::nullopt;
  }

  // ---- logic expressions ----

  LogicExpr or_expr() {
    LogicExpr lhs = and_expr();
    while (accept("|")) lhs = LogicExpr::disjunction(std::move(lhs), and_expr());
    return lhs;
  }

  LogicExpr and_expr() {
    LogicExpr lhs = unary();
    while (accept("&")) lhs = LogicExpr::conjunction(std::move(lhs), unary());
    return lhs;
  }

  LogicExpr unary() {
    if (cur().kind == Token::Kind::kIdent && cur().text == "not") {
      next();
      if (accept("(")) {
        LogicExpr inner = or_expr();
        expect(")");
        return LogicExpr::negation(std::move(inner));
      }
      Literal l = literal();
      l.negated = true;
      return LogicExpr::literal(std::move(l));
    }
    return atomic();
  }

  LogicExpr atomic() {
    if (cur().is("(")) {
      // Either a parenthesised logic expression or a relation whose left
      // side starts with a parenthesised arithmetic expression.
      const std::size_t saved = pos_;
      try {
        next();
        LogicExpr inner = or_expr();
        expect(")");
        if (!rel_op() && !cur().is("+") && !cur().is("-") && !cur().is("*") && !cur().is("/"))
          return inner;
      } catch (const ParseError&) {
      }
      pos_ = saved;
    }
    const Token start = cur();
    Operand lhs = additive();
    if (auto op = rel_op()) {
      next();
      Operand rhs = additive();
      return LogicExpr::relation(*op, std::move(lhs), std::move(rhs));
    }
    if (const Term* t = std::get_if<Term>(&lhs); t && t->is_callable()) {
      Literal l = *Literal::from_term(*t);
      l.loc = loc(start);
      return LogicExpr::literal(std::move(l));
    }
    fail({"==", "\\==", "<", "<=", ">", ">=", "="}, "expected a relational operator");
  }

  // ---- plans ----

  Plan plan() {
    const Token& start = cur();
    Plan p;
    p.loc = loc(start);
    if (accept("+")) {
      p.trigger.kind = accept("!") ? TriggerKind::kGoalAdded : TriggerKind::kBeliefAdded;
    } else {
      expect("-");
      if (cur().is("!")) fail({"atom"}, "goal-deletion triggers are not supported");
      p.trigger.kind = TriggerKind::kBeliefRemoved;
    }
    p.trigger.pattern = literal();
    if (accept(":")) p.context = or_expr();
    if (accept("<-")) {
      p.body.push_back(step());
      while (accept(";")) p.body.push_back(step());
    }
    expect_one_of(p.body.empty() ? std::vector<std::string>{".", ":", "<-"}
                                 : std::vector<std::string>{";", "."});
    const auto unbound = unbound_body_variables(p);
    if (!unbound.empty())
      throw SemanticError(p.loc, "variable " + unbound.front() + " is used before it is bound");
    return p;
  }

  BodyStep step() {
    const Token& t = cur();
    if (accept("!")) return BodyStep::achieve(literal());
    if (accept("+")) return BodyStep::add_belief(literal());
    if (accept("-")) return BodyStep::remove_belief(literal());
    if (accept(".")) {
      std::string name = functor_name();
      return BodyStep::internal(std::move(name), arguments(true));
    }
    if (t.kind == Token::Kind::kIdent && !is_reserved_word(t.text)) {
      std::string id = functor_name();
      if (accept("::")) id += ":" + functor_name();
      return BodyStep::environment(std::move(id), arguments(true));
    }
    fail({"!", "+", "-", ".", "atom"}, "expected a plan body step");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

AgentProgram parse_agent(std::string_view source, std::string name) {
  return Parser(source).program(std::move(name));
}

Term parse_term(std::string_view source) { return Parser(source).single_term(); }
Literal parse_literal(std::string_view source) { return Parser(source).single_literal(); }
LogicExpr parse_logic_expr(std::string_view source) { return Parser(source).single_logic(); }
ArithExpr parse_arith_expr(std::string_view source) { return Parser(source).single_arith(); }

}  // namespace agentblocks::lang
