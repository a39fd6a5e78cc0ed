#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agentblocks/lang/ast.hpp"

namespace agentblocks::lang {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

// Well-formed source that violates a program invariant (non-ground initial
// belief, unbound body variable, ...).
class SemanticError : public std::runtime_error {
 public:
  SemanticError(SourceLocation loc, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

AgentProgram parse_agent(std::string_view source, std::string name = {});

// Single constructs, for tests and tooling.
Term parse_term(std::string_view source);
Literal parse_literal(std::string_view source);
LogicExpr parse_logic_expr(std::string_view source);
ArithExpr parse_arith_expr(std::string_view source);

}  // namespace agentblocks::lang
