#include "agentblocks/runtime/mas.hpp"

#include <set>

namespace agentblocks::runtime {

std::unique_ptr<RunHandle> run_mas(std::vector<AgentSpec> agents, RunOptions options) {
  std::unique_ptr<RunHandle> run(new RunHandle());
  run->run_id_ = options.run_id;
  run->log_ = options.log ? options.log : std::make_shared<RunLog>(options.run_id);
  run->options_ = std::move(options);

  std::set<std::string> names;
  for (const auto& a : agents) {
    if (a.name.empty()) throw RunError("agent name must not be empty");
    if (!names.insert(a.name).second) throw RunError("duplicate agent name " + a.name);
  }

  RunHandle* self = run.get();
  AgentContext ctx{[self](const Message& m) { return self->route(m); }, run->options_.dispatcher, run->log_};
  for (auto& a : agents) {
    try {
      run->agents_.push_back(std::make_unique<AgentInstance>(a.name, std::move(a.program), ctx));
    } catch (const SpawnError& e) {
      throw RunError(e.what());
    }
    run->by_name_[a.name] = run->agents_.back().get();
  }

  run->log_->append("", LogLevel::kInfo, "run started with " + std::to_string(run->agents_.size()) + " agents");
  for (auto& agent : run->agents_) {
    AgentInstance* a = agent.get();
    run->threads_.emplace_back([self, a] { self->cycle(*a); });
  }
  return run;
}

RunHandle::~RunHandle() { stop(); }

bool RunHandle::route(const Message& m) {
  auto it = by_name_.find(m.receiver);
  if (it == by_name_.end()) return false;
  it->second->deliver(m);
  ++delivered_;
  if (options_.on_message) options_.on_message(m);
  return true;
}

void RunHandle::cycle(AgentInstance& agent) {
  using Clock = AgentInstance::Clock;
  constexpr auto kIdleRecheck = std::chrono::milliseconds(200);
  while (!stopping_.load()) {
    const auto start = Clock::now();
    CycleReport r;
    try {
      r = agent.step();
    } catch (const std::exception& e) {
      log_->append(agent.name(), LogLevel::kError, std::string("reasoning cycle failed: ") + e.what());
    }
    if (stopping_.load()) break;
    if (r.idle()) {
      agent.wait_for_work(start + kIdleRecheck);
    } else {
      std::this_thread::sleep_until(start + options_.min_cycle_period);
    }
  }
}

void RunHandle::stop() {
  std::lock_guard lock(stop_mu_);
  const bool first = !stopping_.exchange(true);
  if (first) {
    for (auto& a : agents_) a->stop();
    if (options_.dispatcher) options_.dispatcher->cancel_all();
  }
  for (auto& t : threads_)
    if (t.joinable() && t.get_id() != std::this_thread::get_id()) t.join();
  if (first) log_->append("", LogLevel::kInfo, "run stopped");
}

std::vector<std::string> RunHandle::agent_names() const {
  std::vector<std::string> out;
  for (const auto& a : agents_) out.push_back(a->name());
  return out;
}

std::optional<std::vector<Literal>> RunHandle::beliefs(const std::string& agent) const {
  auto it = by_name_.find(agent);
  if (it == by_name_.end()) return std::nullopt;
  return it->second->beliefs();
}

}  // namespace agentblocks::runtime
