#pragma once

#include <string>

#include "agentblocks/lang/ast.hpp"

namespace agentblocks::lang {

// Canonical source text. Equal ASTs always print byte-identically and the
// output parses back to an equal AST.
std::string print_agent(const AgentProgram& p);

std::string to_source(const Term& t);
std::string to_source(const Literal& l);
std::string to_source(const ArithExpr& e);
std::string to_source(const LogicExpr& e);
std::string to_source(const BodyStep& s);
std::string to_source(const TriggerEvent& t);
std::string to_source(const Rule& r);
std::string to_source(const Plan& p);

// Integral values print without a fractional part; others use the shortest
// representation that reads back to the same double.
std::string format_number(double v);

}  // namespace agentblocks::lang
