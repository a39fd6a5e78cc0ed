#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "agentblocks/runtime/agent.hpp"

namespace agentblocks::runtime {

struct AgentSpec {
  std::string name;
  AgentProgram program;
};

struct RunOptions {
  std::string run_id = "run";
  // Lower bound on the time between two busy cycles of one agent.
  std::chrono::microseconds min_cycle_period{1000};
  std::shared_ptr<ActionDispatcher> dispatcher;
  std::shared_ptr<RunLog> log;  // created when null
  // Called on the sender's thread for every delivered message.
  std::function<void(const Message&)> on_message;
};

/// Raised by run_mas when the run cannot start; no agent has cycled.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A started multi-agent system. Agents are addressable only by the names
/// given to this run; each agent cycles on its own thread.
class RunHandle {
 public:
  ~RunHandle();
  RunHandle(const RunHandle&) = delete;
  RunHandle& operator=(const RunHandle&) = delete;

  const std::string& run_id() const { return run_id_; }
  std::shared_ptr<RunLog> log() const { return log_; }

  // Idempotent and callable from any thread, including an agent's own.
  void stop();
  bool running() const { return !stopping_.load(); }

  std::vector<std::string> agent_names() const;
  // nullopt for an unknown agent.
  std::optional<std::vector<Literal>> beliefs(const std::string& agent) const;
  std::uint64_t messages_delivered() const { return delivered_.load(); }

 private:
  friend std::unique_ptr<RunHandle> run_mas(std::vector<AgentSpec>, RunOptions);
  RunHandle() = default;

  bool route(const Message& m);
  void cycle(AgentInstance& agent);

  std::string run_id_;
  RunOptions options_;
  std::shared_ptr<RunLog> log_;
  std::vector<std::unique_ptr<AgentInstance>> agents_;
  std::map<std::string, AgentInstance*> by_name_;
  std::vector<std::thread> threads_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> delivered_{0};
  std::mutex stop_mu_;
};

// Spawns every agent, then starts cycling. Throws RunError on duplicate
// names or when any program fails to spawn.
std::unique_ptr<RunHandle> run_mas(std::vector<AgentSpec> agents, RunOptions options = {});

}  // namespace agentblocks::runtime
