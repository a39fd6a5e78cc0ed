#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agentblocks/runtime/mas.hpp"
#include "agentblocks/service/templates.hpp"
#include "agentblocks/wot/client.hpp"

namespace agentblocks::service {

class MissingTemplates : public std::runtime_error {
 public:
  explicit MissingTemplates(std::vector<std::string> names);
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

// Returns nullopt for a template that does not exist.
using TemplateLoader = std::function<std::optional<AgentTemplate>(const std::string& name)>;

// Compiles every referenced template once and names the instances.
// Throws MissingTemplates, TemplateError or ConfigError.
std::vector<runtime::AgentSpec> instantiate(const RuntimeConfiguration& config, const TemplateLoader& load);

struct LaunchOptions {
  std::string run_id = "run";
  std::optional<std::string> tdrepo_url;
  std::shared_ptr<runtime::RunLog> log;
  std::function<void(const runtime::Message&)> on_message;
  wot::ClientOptions client;
};

// Resolves the configured workspace's TDs (failures are logged, not fatal),
// attaches a WoT dispatcher and starts the run. Throws runtime::RunError.
std::unique_ptr<runtime::RunHandle> launch(const RuntimeConfiguration& config, std::vector<runtime::AgentSpec> agents,
                                           LaunchOptions options);

}  // namespace agentblocks::service
