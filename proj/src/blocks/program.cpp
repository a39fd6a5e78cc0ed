#include "agentblocks/blocks/program.hpp"

namespace agentblocks::blocks {

using OJson = nlohmann::ordered_json;

namespace {

// Documents are trees, so depth is bounded to keep recursion safe.
constexpr int kMaxDepth = 256;

class Reader {
 public:
  explicit Reader(BlockProgram& bp) : bp_(bp) {}

  BlockIndex block(const OJson& j, const std::string& path, int depth) {
    if (depth > kMaxDepth) throw FormatError(path, "block nesting deeper than " + std::to_string(kMaxDepth));
    if (!j.is_object()) throw FormatError(path, "block must be an object");
    Block b;
    b.id = required_string(j, "id", path);
    b.type = required_string(j, "type", path);
    if (const auto f = j.find("fields"); f != j.end()) {
      if (!f->is_object()) throw FormatError(path + "/fields", "must be an object");
      for (const auto& [k, v] : f->items()) {
        if (v.is_string()) b.fields.emplace(k, v.get<std::string>());
        else if (v.is_boolean()) b.fields.emplace(k, v.get<bool>());
        else if (v.is_number()) b.fields.emplace(k, v.get<double>());
        else throw FormatError(path + "/fields/" + k, "field values must be strings, numbers or booleans");
      }
    }
    if (const auto m = j.find("mutation"); m != j.end()) {
      if (!m->is_object()) throw FormatError(path + "/mutation", "must be an object");
      for (const auto& [k, v] : m->items()) {
        if (!v.is_string()) throw FormatError(path + "/mutation/" + k, "mutation values must be strings");
        b.mutation.emplace(k, v.get<std::string>());
      }
    }
    if (const auto meta = j.find("meta"); meta != j.end()) b.meta = *meta;

    // Children are appended after the parent so indices follow document order.
    const BlockIndex self = bp_.add(std::move(b));
    if (const auto in = j.find("inputs"); in != j.end()) {
      if (!in->is_object()) throw FormatError(path + "/inputs", "must be an object");
      for (const auto& [k, v] : in->items()) {
        const BlockIndex child = block(v, path + "/inputs/" + k, depth + 1);
        bp_.blocks[self].inputs.emplace(k, child);
      }
    }
    if (const auto n = j.find("next"); n != j.end() && !n->is_null()) {
      const BlockIndex child = block(*n, path + "/next", depth + 1);
      bp_.blocks[self].next = child;
    }
    return self;
  }

 private:
  static std::string required_string(const OJson& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw FormatError(path + "/" + key, "missing string member");
    return it->get<std::string>();
  }

  BlockProgram& bp_;
};

OJson block_json(const BlockProgram& bp, BlockIndex i, int depth);

OJson block_json(const BlockProgram& bp, BlockIndex i, int depth) {
  if (depth > kMaxDepth) throw FormatError("", "block nesting deeper than " + std::to_string(kMaxDepth));
  const Block& b = bp.at(i);
  OJson j;
  j["id"] = b.id;
  j["type"] = b.type;
  if (!b.fields.empty()) {
    OJson f = OJson::object();
    for (const auto& [k, v] : b.fields) std::visit([&](const auto& x) { f[k] = x; }, v);
    j["fields"] = std::move(f);
  }
  if (!b.inputs.empty()) {
    OJson in = OJson::object();
    for (const auto& [k, c] : b.inputs) in[k] = block_json(bp, c, depth + 1);
    j["inputs"] = std::move(in);
  }
  if (b.next) j["next"] = block_json(bp, *b.next, depth + 1);
  if (!b.mutation.empty()) j["mutation"] = b.mutation;
  if (!b.meta.is_null()) j["meta"] = b.meta;
  return j;
}

}  // namespace

BlockProgram parse_block_program(std::string_view json_text) {
  OJson doc = OJson::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded()) throw FormatError("", "document is not valid JSON");
  return block_program_from_json(doc);
}

BlockProgram block_program_from_json(const OJson& doc) {
  if (!doc.is_object()) throw FormatError("", "document must be a JSON object");
  const auto version = doc.find("formatVersion");
  if (version == doc.end() || !version->is_number_integer())
    throw FormatError("/formatVersion", "missing integer formatVersion");
  if (version->get<long long>() != BlockProgram::kFormatVersion)
    throw FormatError("/formatVersion", "unsupported formatVersion " + version->dump());
  BlockProgram bp;
  const auto name = doc.find("agentName");
  if (name == doc.end() || !name->is_string()) throw FormatError("/agentName", "missing string member");
  bp.agent_name = name->get<std::string>();
  const auto tops = doc.find("topBlocks");
  if (tops == doc.end() || !tops->is_array()) throw FormatError("/topBlocks", "missing array member");
  Reader reader(bp);
  for (std::size_t i = 0; i < tops->size(); ++i)
    bp.top_blocks.push_back(reader.block((*tops)[i], "/topBlocks/" + std::to_string(i), 0));
  if (const auto meta = doc.find("meta"); meta != doc.end()) bp.meta = *meta;
  return bp;
}

OJson to_json(const BlockProgram& bp) {
  OJson j;
  j["formatVersion"] = BlockProgram::kFormatVersion;
  j["agentName"] = bp.agent_name;
  OJson tops = OJson::array();
  for (BlockIndex i : bp.top_blocks) tops.push_back(block_json(bp, i, 0));
  j["topBlocks"] = std::move(tops);
  if (!bp.meta.is_null()) j["meta"] = bp.meta;
  return j;
}

std::string serialize_block_program(const BlockProgram& bp) { return to_json(bp).dump(2) + "\n"; }

}  // namespace agentblocks::blocks
