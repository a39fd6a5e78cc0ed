#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agentblocks/lang/ast.hpp"
#include "agentblocks/lang/substitution.hpp"
#include "agentblocks/logic/belief_base.hpp"
#include "agentblocks/runtime/run_log.hpp"
#include "agentblocks/runtime/term_json.hpp"

namespace agentblocks::runtime {

using lang::AgentProgram;
using lang::Literal;
using lang::Substitution;
using lang::TriggerKind;

enum class Performative { kTell, kAchieve };
std::string_view to_string(Performative p);

struct Message {
  std::string sender;
  std::string receiver;
  Performative performative = Performative::kTell;
  Literal content;  // ground
};

struct EnvironmentRequest {
  std::string agent;
  std::string action;      // e.g. wot:readproperty
  std::vector<Term> args;  // fully instantiated; an output slot stays a variable
};

struct ActionOutcome {
  std::optional<Json> value;         // response document, absent when empty
  std::optional<std::string> error;  // set on failure

  static ActionOutcome success(std::optional<Json> v) { return {std::move(v), std::nullopt}; }
  static ActionOutcome failure(std::string msg) { return {std::nullopt, std::move(msg)}; }
};

// Must be invoked exactly once, from any thread.
using ActionCallback = std::function<void(ActionOutcome)>;

/// Executes environment actions asynchronously on behalf of agents.
class ActionDispatcher {
 public:
  virtual ~ActionDispatcher() = default;
  virtual void dispatch(EnvironmentRequest request, ActionCallback done) = 0;
  // Best-effort cancellation of everything in flight.
  virtual void cancel_all() {}
};

struct AgentContext {
  // Returns false when the receiver does not exist.
  std::function<bool(const Message&)> send;
  std::shared_ptr<ActionDispatcher> dispatcher;
  std::shared_ptr<RunLog> log;
};

struct Event {
  TriggerKind kind = TriggerKind::kGoalAdded;
  Literal content;
  std::uint64_t origin = 0;  // 0: external; otherwise the suspended intention
};

struct PlanChoice {
  std::size_t plan_index = 0;
  // Trigger and context variables of the chosen plan, under their source
  // names, fully resolved.
  Substitution bindings;
};

struct CycleReport {
  std::size_t messages = 0;
  std::size_t completions = 0;
  std::optional<Event> event;
  std::optional<PlanChoice> choice;
  std::optional<std::uint64_t> stepped;  // intention that executed a step
  bool idle() const { return messages == 0 && completions == 0 && !event && !stepped; }
};

enum class AgentStatus { kRunning, kIdle, kStopped };

/// Raised when a program cannot be spawned.
class SpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One BDI agent. `step` must only be called by the owning thread; every
/// other member is safe to call concurrently.
class AgentInstance {
 public:
  using Clock = std::chrono::steady_clock;

  // Seeds the belief base (no events) and queues one goal event per initial
  // goal. Throws SpawnError on program invariant violations.
  AgentInstance(std::string name, AgentProgram program, AgentContext ctx);
  ~AgentInstance();
  AgentInstance(const AgentInstance&) = delete;
  AgentInstance& operator=(const AgentInstance&) = delete;

  const std::string& name() const { return name_; }
  const AgentProgram& program() const { return program_; }

  CycleReport step();

  void deliver(Message m);
  void stop();
  AgentStatus status() const;

  std::vector<Literal> beliefs() const;
  std::vector<Event> pending_events() const;
  std::size_t intention_count() const;

  // Owner thread only. Blocks until there is something to do, `deadline`
  // passes or the agent is stopped.
  void wait_for_work(Clock::time_point deadline);

 private:
  struct Frame {
    std::size_t plan_index = 0;
    std::vector<lang::BodyStep> body;
    std::size_t pc = 0;
    Substitution subst;
    Literal goal;  // renamed trigger pattern
  };
  struct Intention {
    std::uint64_t id = 0;
    std::vector<Frame> stack;
    Clock::time_point wake_at{};
    bool awaiting_subgoal = false;
    bool awaiting_action = false;
    std::optional<std::string> out_var;
  };
  struct Inbox;
  struct Selection {
    Frame frame;
    PlanChoice choice;
  };

  void log(LogLevel level, const std::string& msg) const;
  bool update_belief(bool add, const Literal& l);
  std::optional<Selection> select(const Event& ev);
  void handle_event(const Event& ev, CycleReport& r);
  void apply_completion(std::uint64_t id, ActionOutcome outcome);
  bool runnable(const Intention& it, Clock::time_point now) const;
  void execute_step(std::size_t index);
  // Returns an error message on failure.
  std::optional<std::string> run_internal(Intention& it, Frame& f, const lang::BodyStep& st);
  std::optional<std::string> run_environment(Intention& it, Frame& f, const lang::BodyStep& st);
  // Pops finished frames; erases the intention when its stack empties.
  void unwind(std::uint64_t id);
  void drop(std::uint64_t id, const std::string& reason);
  Intention* find(std::uint64_t id);
  bool has_ready_work(Clock::time_point now, Clock::time_point& earliest) const;

  std::string name_;
  AgentProgram program_;
  AgentContext ctx_;
  std::shared_ptr<Inbox> inbox_;

  mutable std::mutex state_mu_;
  logic::BeliefBase bb_;
  std::deque<Event> events_;
  std::vector<Intention> intentions_;
  std::size_t rr_ = 0;
  std::uint64_t next_intention_ = 0;
  unsigned long fresh_ = 0;
  std::atomic<AgentStatus> status_{AgentStatus::kRunning};
};

}  // namespace agentblocks::runtime
