#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "agentblocks/blocks/catalog.hpp"
#include "agentblocks/blocks/program.hpp"
#include "agentblocks/lang/ast.hpp"

namespace agentblocks::blocks {

class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct CompileResult {
  std::optional<lang::AgentProgram> program;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

CompileResult try_compile(const BlockProgram& bp, const BlockCatalog& catalog = BlockCatalog::standard());

// Empty iff the program compiles.
std::vector<Diagnostic> validate(const BlockProgram& bp, const BlockCatalog& catalog = BlockCatalog::standard());

// Throws CompileError when validate would report anything.
lang::AgentProgram compile(const BlockProgram& bp, const BlockCatalog& catalog = BlockCatalog::standard());

}  // namespace agentblocks::blocks
