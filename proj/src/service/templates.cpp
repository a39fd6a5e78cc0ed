#include "agentblocks/service/templates.hpp"

#include <set>

#include "agentblocks/blocks/compiler.hpp"
#include "agentblocks/blocks/program.hpp"
#include "agentblocks/lang/parser.hpp"
#include "agentblocks/lang/printer.hpp"
#include "agentblocks/lang/term.hpp"

namespace agentblocks::service {

std::string_view to_string(SourceKind k) { return k == SourceKind::kBlocks ? "blocks" : "text"; }

OrderedJson to_json(const AgentTemplate& t) {
  return OrderedJson{{"name", t.name}, {"sourceKind", to_string(t.kind)}, {"body", t.body}, {"updatedAt", t.updated_at}};
}

AgentTemplate template_from_json(const OrderedJson& j) {
  if (!j.is_object()) throw std::invalid_argument("template must be a JSON object");
  AgentTemplate t;
  if (j.contains("name") && j["name"].is_string()) t.name = j["name"];
  const auto kind = j.value("sourceKind", std::string());
  if (kind == "blocks") t.kind = SourceKind::kBlocks;
  else if (kind == "text") t.kind = SourceKind::kText;
  else throw std::invalid_argument("sourceKind must be \"blocks\" or \"text\"");
  if (!j.contains("body")) throw std::invalid_argument("template has no body");
  t.body = j["body"];
  if (t.kind == SourceKind::kBlocks && !t.body.is_object())
    throw std::invalid_argument("blocks template body must be a blocks document");
  if (t.kind == SourceKind::kText && !t.body.is_string())
    throw std::invalid_argument("text template body must be a string");
  if (j.contains("updatedAt") && j["updatedAt"].is_string()) t.updated_at = j["updatedAt"];
  return t;
}

namespace {

Json format_diagnostic(const std::string& path, const std::string& message) {
  return Json{{"code", "FormatError"}, {"path", path}, {"message", message}, {"severity", "error"}};
}

Json text_diagnostic(const char* code, int line, int column, const std::string& message) {
  return Json{{"code", code}, {"line", line}, {"column", column}, {"message", message}, {"severity", "error"}};
}

CompiledTemplate compile_blocks(const blocks::BlockProgram& bp) {
  auto result = blocks::try_compile(bp);
  if (!result.program) throw TemplateError("blocks document has diagnostics", blocks::to_json(result.diagnostics));
  return {*result.program, lang::print_agent(*result.program)};
}

}  // namespace

CompiledTemplate compile_blocks_text(std::string_view json_text) {
  try {
    return compile_blocks(blocks::parse_block_program(json_text));
  } catch (const blocks::FormatError& e) {
    throw TemplateError(e.what(), Json::array({format_diagnostic(e.path(), e.what())}));
  }
}

CompiledTemplate compile_source_text(std::string_view source) {
  try {
    auto program = lang::parse_agent(source);
    return {program, lang::print_agent(program)};
  } catch (const lang::ParseError& e) {
    throw TemplateError(e.what(), Json::array({text_diagnostic("ParseError", e.line(), e.column(), e.what())}));
  } catch (const lang::SemanticError& e) {
    throw TemplateError(e.what(), Json::array({text_diagnostic("SemanticError", e.line(), e.column(), e.what())}));
  }
}

CompiledTemplate compile_template(const AgentTemplate& t) {
  if (t.kind == SourceKind::kText) {
    if (!t.body.is_string()) throw TemplateError("text template body must be a string", Json::array());
    return compile_source_text(t.body.get<std::string>());
  }
  try {
    return compile_blocks(blocks::block_program_from_json(t.body));
  } catch (const blocks::FormatError& e) {
    throw TemplateError(e.what(), Json::array({format_diagnostic(e.path(), e.what())}));
  }
}

RuntimeConfiguration configuration_from_json(const Json& j, std::string name) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RuntimeConfiguration c;
  c.name = !name.empty() ? std::move(name) : j.value("name", std::string());
  if (j.contains("workspace") && !j["workspace"].is_null()) {
    if (!j["workspace"].is_string()) throw ConfigError("workspace must be a string");
    c.workspace = j["workspace"].get<std::string>();
  }
  if (!j.contains("entries") || !j["entries"].is_array()) throw ConfigError("configuration needs an entries array");
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const Json& e = j["entries"][i];
    const std::string where = "entries[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ConfigError(where + " must be an object");
    if (!e.contains("template") || !e["template"].is_string() || e["template"].get<std::string>().empty())
      throw ConfigError(where + " needs a template name");
    ConfigEntry entry;
    entry.template_name = e["template"];
    entry.instance = entry.template_name;
    if (e.contains("instance")) {
      if (!e["instance"].is_string()) throw ConfigError(where + ".instance must be a string");
      entry.instance = e["instance"];
    }
    if (e.contains("count")) {
      if (!e["count"].is_number_integer() || e["count"].get<long long>() < 1 || e["count"].get<long long>() > 1000)
        throw ConfigError(where + ".count must be an integer between 1 and 1000");
      entry.count = e["count"].get<int>();
    }
    c.entries.push_back(std::move(entry));
  }
  expand(c);
  return c;
}

Json to_json(const RuntimeConfiguration& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries)
    entries.push_back(Json{{"template", e.template_name}, {"instance", e.instance}, {"count", e.count}});
  Json j{{"name", c.name}, {"entries", entries}};
  if (c.workspace) j["workspace"] = *c.workspace;
  return j;
}

std::vector<std::pair<std::string, std::string>> expand(const RuntimeConfiguration& c) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for (const auto& e : c.entries) {
    // Instance names are message receivers, so they must be valid atoms.
    if (!lang::is_atom_name(e.instance) || lang::is_reserved_word(e.instance))
      throw ConfigError("instance name '" + e.instance + "' is not a valid agent name");
    for (int i = 1; i <= e.count; ++i) {
      std::string name = e.count == 1 ? e.instance : e.instance + "_" + std::to_string(i);
      if (!seen.insert(name).second) throw ConfigError("duplicate instance name '" + name + "'");
      out.emplace_back(e.template_name, std::move(name));
    }
  }
  return out;
}

}  // namespace agentblocks::service
