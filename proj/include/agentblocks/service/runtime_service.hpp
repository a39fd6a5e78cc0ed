#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "agentblocks/http/host.hpp"
#include "agentblocks/runtime/mas.hpp"
#include "agentblocks/service/launch.hpp"
#include "agentblocks/service/templates.hpp"

namespace agentblocks::service {

struct RuntimeConfig {
  http::Address address{"127.0.0.1", 8080};
  std::filesystem::path data_dir = "data";
  std::size_t max_runs = 8;
  std::optional<std::string> tdrepo_url;
  wot::ClientOptions client;
};

// Defaults overridden by RUNTIME_ADDR, RUNTIME_DATA, RUNTIME_MAX_RUNS and
// TDREPO_URL. Throws std::invalid_argument for malformed values.
RuntimeConfig runtime_config_from_env();

/// Template and configuration storage plus run lifecycle over HTTP.
/// Files: data/agents/{name}.json, data/configs/{name}.json and
/// data/runs/{id}.json. Runs live in memory only; a restart marks every
/// persisted run as stopped.
class RuntimeService {
 public:
  explicit RuntimeService(RuntimeConfig config);
  ~RuntimeService();

  int bind(const http::Address& addr) { return host_.bind(addr); }
  int bind() { return host_.bind(config_.address); }
  std::string url() const { return host_.url(); }
  void start() { host_.start(); }
  void run() { host_.run(); }
  // Stops serving and stops every run.
  void stop();

 private:
  struct Run {
    Json record;  // runId, configuration, status, startedAt, stoppedAt, agents
    std::unique_ptr<runtime::RunHandle> handle;
    std::shared_ptr<runtime::RunLog> log;
  };

  void install_routes();
  std::optional<AgentTemplate> load_template(const std::string& name) const;
  std::optional<RuntimeConfiguration> load_configuration(const std::string& name) const;
  void persist(const Run& run) const;
  void stop_run(Run& run);
  std::size_t running_count() const;
  Json run_view(const Run& run) const;
  std::string new_run_id() const;

  RuntimeConfig config_;
  std::filesystem::path agents_dir_;
  std::filesystem::path configs_dir_;
  std::filesystem::path runs_dir_;
  mutable std::mutex store_mu_;
  mutable std::mutex runs_mu_;
  std::map<std::string, Run> runs_;
  http::Host host_;
};

}  // namespace agentblocks::service
