#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace agentblocks::blocks {

using BlockIndex = std::size_t;
using FieldValue = std::variant<std::string, double, bool>;

// Blocks live in a flat arena; inputs and next refer to arena indices.
struct Block {
  std::string id;
  std::string type;
  std::map<std::string, FieldValue> fields;
  std::map<std::string, BlockIndex> inputs;
  std::optional<BlockIndex> next;
  std::map<std::string, std::string> mutation;
  nlohmann::ordered_json meta;  // opaque editor data (geometry); null when absent
};

struct BlockProgram {
  static constexpr int kFormatVersion = 1;

  std::string agent_name;
  std::vector<Block> blocks;
  std::vector<BlockIndex> top_blocks;  // canvas order
  nlohmann::ordered_json meta;

  const Block& at(BlockIndex i) const { return blocks.at(i); }
  BlockIndex add(Block b) {
    blocks.push_back(std::move(b));
    return blocks.size() - 1;
  }
};

// Malformed serialization: invalid JSON, wrong member types, unsupported
// formatVersion. Semantic problems are diagnostics, not format errors.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

BlockProgram parse_block_program(std::string_view json_text);
BlockProgram block_program_from_json(const nlohmann::ordered_json& doc);

// Tree-shaped document. Serializing a parsed program reproduces its content
// with members in a fixed order.
nlohmann::ordered_json to_json(const BlockProgram& bp);
std::string serialize_block_program(const BlockProgram& bp);

}  // namespace agentblocks::blocks
