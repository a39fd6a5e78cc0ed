#include "agentblocks/service/launch.hpp"

#include <map>

#include "agentblocks/runtime/wot_dispatcher.hpp"

namespace agentblocks::service {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

MissingTemplates::MissingTemplates(std::vector<std::string> names)
    : std::runtime_error("missing templates: " + join(names)), names_(std::move(names)) {}

std::vector<runtime::AgentSpec> instantiate(const RuntimeConfiguration& config, const TemplateLoader& load) {
  const auto instances = expand(config);
  std::map<std::string, std::optional<AgentTemplate>> templates;
  std::vector<std::string> missing;
  for (const auto& [tpl, instance] : instances) {
    if (templates.count(tpl)) continue;
    templates[tpl] = load(tpl);
    if (!templates[tpl]) missing.push_back(tpl);
  }
  if (!missing.empty()) throw MissingTemplates(missing);

  std::map<std::string, lang::AgentProgram> programs;
  for (const auto& [name, tpl] : templates) {
    try {
      programs[name] = compile_template(*tpl).program;
    } catch (const TemplateError& e) {
      throw TemplateError("template '" + name + "': " + e.what(), e.diagnostics());
    }
  }
  std::vector<runtime::AgentSpec> out;
  for (const auto& [tpl, instance] : instances) {
    lang::AgentProgram p = programs.at(tpl);
    p.name = instance;
    out.push_back({instance, std::move(p)});
  }
  return out;
}

std::unique_ptr<runtime::RunHandle> launch(const RuntimeConfiguration& config, std::vector<runtime::AgentSpec> agents,
                                           LaunchOptions options) {
  auto log = options.log ? options.log : std::make_shared<runtime::RunLog>(options.run_id);
  std::vector<wot::ThingDescription> things;
  if (config.workspace) {
    if (!options.tdrepo_url) {
      log->append("", runtime::LogLevel::kWarn,
                  "workspace '" + *config.workspace + "' configured but no TD repository URL is set");
    } else {
      try {
        auto fetched = wot::fetch_workspace_tds(*options.tdrepo_url, *config.workspace, options.client);
        for (const auto& w : fetched.warnings) log->append("", runtime::LogLevel::kWarn, w);
        things = std::move(fetched.things);
        log->append("", runtime::LogLevel::kInfo,
                    "resolved " + std::to_string(things.size()) + " things from workspace '" + *config.workspace + "'");
      } catch (const std::exception& e) {
        // Things may come online later; invocations fail individually instead.
        log->append("", runtime::LogLevel::kWarn, std::string("workspace TDs unavailable: ") + e.what());
      }
    }
  }
  runtime::RunOptions ro;
  ro.run_id = options.run_id;
  ro.log = log;
  ro.on_message = std::move(options.on_message);
  ro.dispatcher = std::make_shared<runtime::WotDispatcher>(std::move(things), options.client);
  return runtime::run_mas(std::move(agents), std::move(ro));
}

}  // namespace agentblocks::service
