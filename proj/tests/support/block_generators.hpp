#pragma once

#include <random>

#include "agentblocks/blocks/program.hpp"
#include "agentblocks/lang/ast.hpp"

namespace agentblocks::testing {

// A valid block document together with the AgentProgram it must compile
// to, built side by side from the same random choices.
struct BlockCase {
  blocks::BlockProgram program;
  lang::AgentProgram expected;
};

BlockCase random_block_case(std::mt19937& rng);

}  // namespace agentblocks::testing
