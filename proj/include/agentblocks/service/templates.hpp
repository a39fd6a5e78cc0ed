#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agentblocks/lang/ast.hpp"
#include "json.hpp"

namespace agentblocks::service {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

enum class SourceKind { kBlocks, kText };
std::string_view to_string(SourceKind k);

struct AgentTemplate {
  std::string name;
  SourceKind kind = SourceKind::kText;
  OrderedJson body;  // blocks document object, or the source text as a string
  std::string updated_at;
};

OrderedJson to_json(const AgentTemplate& t);
// Accepts {"name", "sourceKind", "body", "updatedAt"}; throws std::invalid_argument.
AgentTemplate template_from_json(const OrderedJson& j);

/// A template that does not compile. Diagnostics use one JSON shape per
/// source kind: block diagnostics {code, blockId, message, severity}, text
/// diagnostics {code, line, column, message, severity}, document format
/// errors {code, path, message, severity}.
class TemplateError : public std::runtime_error {
 public:
  TemplateError(const std::string& message, Json diagnostics)
      : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}
  const Json& diagnostics() const { return diagnostics_; }

 private:
  Json diagnostics_;
};

struct CompiledTemplate {
  lang::AgentProgram program;
  std::string source;  // canonical text
};

CompiledTemplate compile_template(const AgentTemplate& t);

// Blocks documents are JSON text; anything else is agent source text.
CompiledTemplate compile_blocks_text(std::string_view json_text);
CompiledTemplate compile_source_text(std::string_view source);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string template_name;
  std::string instance;  // base name
  int count = 1;
};

struct RuntimeConfiguration {
  std::string name;
  std::vector<ConfigEntry> entries;
  std::optional<std::string> workspace;
};

// {"name"?, "entries": [{"template", "instance"?, "count"?}], "workspace"?}.
// Validates the expansion; throws ConfigError.
RuntimeConfiguration configuration_from_json(const Json& j, std::string name = {});
Json to_json(const RuntimeConfiguration& c);

// (template, instance name) pairs: `base` when count is 1, else base_1..base_n.
// Throws ConfigError for invalid or duplicate instance names.
std::vector<std::pair<std::string, std::string>> expand(const RuntimeConfiguration& c);

}  // namespace agentblocks::service
