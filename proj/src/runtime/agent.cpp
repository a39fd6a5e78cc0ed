#include "agentblocks/runtime/agent.hpp"

#include <algorithm>
#include <condition_variable>
#include <sstream>

#include "agentblocks/lang/printer.hpp"
#include "agentblocks/logic/solver.hpp"

namespace agentblocks::runtime {

using lang::BodyStep;

std::string_view to_string(Performative p) { return p == Performative::kTell ? "tell" : "achieve"; }

// Shared with dispatcher callbacks, which may outlive the agent.
struct AgentInstance::Inbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Message> mail;
  std::deque<std::pair<std::uint64_t, ActionOutcome>> done;
  bool stopped = false;
};

namespace {

std::string trigger_text(const Event& ev) {
  return lang::to_source(lang::TriggerEvent{ev.kind, ev.content});
}

BodyStep apply_step(const Substitution& s, const BodyStep& st) {
  BodyStep out = st;
  out.literal = lang::apply(s, st.literal);
  out.args = lang::apply(s, st.args);
  return out;
}

std::string display(const Term& t) { return t.is_string() ? t.text() : lang::to_source(t); }

std::optional<std::string> key_text(const Term& t) {
  if (t.is_string()) return t.text();
  if (t.is_atom()) return t.name();
  if (t.is_number()) return lang::format_number(t.number());
  return std::nullopt;
}

std::optional<Json> document_of(const Term& t) {
  if (t.is_string()) {
    Json parsed = Json::parse(t.text(), nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    return Json(t.text());
  }
  return term_to_json(t);
}

}  // namespace

AgentInstance::AgentInstance(std::string name, AgentProgram program, AgentContext ctx)
    : name_(std::move(name)),
      program_(std::move(program)),
      ctx_(std::move(ctx)),
      inbox_(std::make_shared<Inbox>()),
      bb_(program_.rules) {
  for (const auto& plan : program_.plans) {
    const auto unbound = lang::unbound_body_variables(plan);
    if (!unbound.empty())
      throw SpawnError("agent " + name_ + ": plan " + lang::to_source(plan.trigger) + " uses unbound variable " +
                       unbound.front());
  }
  for (const auto& b : program_.initial_beliefs) {
    if (!b.is_ground() || b.negated)
      throw SpawnError("agent " + name_ + ": initial belief " + lang::to_source(b) + " is not a ground fact");
    bb_.add(b);
  }
  for (const auto& g : program_.initial_goals) {
    if (!g.is_ground()) throw SpawnError("agent " + name_ + ": initial goal " + lang::to_source(g) + " is not ground");
    events_.push_back(Event{TriggerKind::kGoalAdded, g, 0});
  }
}

AgentInstance::~AgentInstance() { stop(); }

void AgentInstance::log(LogLevel level, const std::string& msg) const {
  if (ctx_.log) ctx_.log->append(name_, level, msg);
}

void AgentInstance::deliver(Message m) {
  {
    std::lock_guard lock(inbox_->mu);
    if (inbox_->stopped) return;
    inbox_->mail.push_back(std::move(m));
  }
  inbox_->cv.notify_all();
}

void AgentInstance::stop() {
  {
    std::lock_guard lock(inbox_->mu);
    inbox_->stopped = true;
  }
  inbox_->cv.notify_all();
  status_.store(AgentStatus::kStopped);
}

AgentStatus AgentInstance::status() const { return status_.load(); }

std::vector<Literal> AgentInstance::beliefs() const {
  std::lock_guard lock(state_mu_);
  return bb_.facts();
}

std::vector<Event> AgentInstance::pending_events() const {
  std::lock_guard lock(state_mu_);
  return {events_.begin(), events_.end()};
}

std::size_t AgentInstance::intention_count() const {
  std::lock_guard lock(state_mu_);
  return intentions_.size();
}

bool AgentInstance::update_belief(bool add, const Literal& l) {
  const bool changed = add ? bb_.add(l) : bb_.remove(l);
  if (changed) events_.push_back(Event{add ? TriggerKind::kBeliefAdded : TriggerKind::kBeliefRemoved, l, 0});
  return changed;
}

CycleReport AgentInstance::step() {
  CycleReport r;
  std::deque<Message> mail;
  std::deque<std::pair<std::uint64_t, ActionOutcome>> done;
  {
    std::lock_guard lock(inbox_->mu);
    if (inbox_->stopped) return r;
    mail.swap(inbox_->mail);
    done.swap(inbox_->done);
  }

  std::lock_guard lock(state_mu_);
  for (auto& m : mail) {
    ++r.messages;
    if (m.performative == Performative::kTell) {
      update_belief(true, m.content);
    } else {
      events_.push_back(Event{TriggerKind::kGoalAdded, std::move(m.content), 0});
    }
  }
  for (auto& [id, outcome] : done) {
    ++r.completions;
    apply_completion(id, std::move(outcome));
  }

  if (!events_.empty()) {
    Event ev = std::move(events_.front());
    events_.pop_front();
    handle_event(ev, r);
    r.event = std::move(ev);
  }

  const auto now = Clock::now();
  for (std::size_t k = 0; k < intentions_.size(); ++k) {
    const std::size_t i = (rr_ + k) % intentions_.size();
    if (!runnable(intentions_[i], now)) continue;
    r.stepped = intentions_[i].id;
    rr_ = i + 1;
    execute_step(i);
    break;
  }
  if (!intentions_.empty()) rr_ %= intentions_.size();
  else rr_ = 0;

  AgentStatus expected = status_.load();
  if (expected != AgentStatus::kStopped)
    status_.compare_exchange_strong(expected, r.idle() ? AgentStatus::kIdle : AgentStatus::kRunning);
  return r;
}

std::optional<AgentInstance::Selection> AgentInstance::select(const Event& ev) {
  logic::Solver solver(bb_);
  for (std::size_t pi = 0; pi < program_.plans.size(); ++pi) {
    const lang::Plan& plan = program_.plans[pi];
    if (plan.trigger.kind != ev.kind) continue;
    if (plan.trigger.pattern.functor != ev.content.functor ||
        plan.trigger.pattern.args.size() != ev.content.args.size())
      continue;

    std::vector<std::string> vars;
    plan.trigger.pattern.collect_variables(vars);
    if (plan.context) plan.context->collect_variables(vars);
    const std::size_t head_vars = vars.size();
    for (const auto& st : plan.body) {
      st.literal.collect_variables(vars);
      for (const auto& a : st.args) a.collect_variables(vars);
    }
    const std::string suffix = "#" + std::to_string(++fresh_);
    Substitution rename;
    for (const auto& v : vars) rename.bind(v, Term::variable(v + suffix));

    const Literal trigger = lang::apply(rename, plan.trigger.pattern);
    auto s = lang::unify(trigger, ev.content);
    if (!s) continue;
    if (plan.context) {
      std::optional<logic::QuerySolution> sol;
      try {
        sol = solver.first(lang::apply(rename, *plan.context), *s);
      } catch (const logic::QueryError& e) {
        log(LogLevel::kWarn, "context of plan " + std::to_string(pi) + " for " + trigger_text(ev) +
                                 " could not be evaluated: " + e.what());
        continue;
      }
      if (!sol) continue;
      s = sol->substitution;
    }

    Selection sel;
    sel.frame.plan_index = pi;
    sel.frame.subst = *s;
    sel.frame.goal = trigger;
    sel.frame.body.reserve(plan.body.size());
    for (const auto& st : plan.body) sel.frame.body.push_back(apply_step(rename, st));
    sel.choice.plan_index = pi;
    for (std::size_t k = 0; k < head_vars; ++k) {
      const Term renamed = Term::variable(vars[k] + suffix);
      const Term value = lang::apply(*s, renamed);
      if (!(value == renamed)) sel.choice.bindings.bind(vars[k], value);
    }
    return sel;
  }
  return std::nullopt;
}

void AgentInstance::handle_event(const Event& ev, CycleReport& r) {
  auto sel = select(ev);
  if (!sel) {
    // Belief changes without handlers are routine; unhandled goals are not.
    const LogLevel level = ev.kind == TriggerKind::kGoalAdded ? LogLevel::kWarn : LogLevel::kDebug;
    log(level, "no applicable plan for " + trigger_text(ev) + "; event dropped");
    if (ev.origin != 0) drop(ev.origin, "subgoal " + trigger_text(ev) + " has no applicable plan");
    return;
  }
  r.choice = sel->choice;
  std::uint64_t id = ev.origin;
  if (id != 0) {
    Intention* it = find(id);
    if (!it) return;
    it->stack.push_back(std::move(sel->frame));
    it->awaiting_subgoal = false;
  } else {
    Intention it;
    it.id = ++next_intention_;
    it.stack.push_back(std::move(sel->frame));
    intentions_.push_back(std::move(it));
    id = intentions_.back().id;
  }
  log(LogLevel::kDebug, "intention " + std::to_string(id) + " adopts plan " + std::to_string(sel->choice.plan_index) +
                            " for " + trigger_text(ev));
  unwind(id);
}

AgentInstance::Intention* AgentInstance::find(std::uint64_t id) {
  for (auto& it : intentions_)
    if (it.id == id) return &it;
  return nullptr;
}

void AgentInstance::drop(std::uint64_t id, const std::string& reason) {
  auto pos = std::find_if(intentions_.begin(), intentions_.end(), [id](const Intention& it) { return it.id == id; });
  if (pos == intentions_.end()) return;
  const auto index = static_cast<std::size_t>(pos - intentions_.begin());
  intentions_.erase(pos);
  if (index < rr_) --rr_;
  log(LogLevel::kError, "intention " + std::to_string(id) + " dropped: " + reason);
}

void AgentInstance::unwind(std::uint64_t id) {
  Intention* it = find(id);
  while (it && !it->stack.empty() && it->stack.back().pc >= it->stack.back().body.size()) {
    Frame done = std::move(it->stack.back());
    it->stack.pop_back();
    if (it->stack.empty()) break;
    Frame& caller = it->stack.back();
    const Literal call = lang::apply(caller.subst, caller.body[caller.pc].literal);
    const Literal result = lang::apply(done.subst, done.goal);
    auto s = lang::unify(call, result, caller.subst);
    if (!s) {
      drop(id, "result of subgoal " + lang::to_source(result) + " does not match " + lang::to_source(call));
      return;
    }
    caller.subst = std::move(*s);
    ++caller.pc;
  }
  if (it && it->stack.empty()) {
    auto pos = static_cast<std::size_t>(it - intentions_.data());
    intentions_.erase(intentions_.begin() + static_cast<std::ptrdiff_t>(pos));
    if (pos < rr_) --rr_;
    log(LogLevel::kDebug, "intention " + std::to_string(id) + " completed");
  }
}

bool AgentInstance::runnable(const Intention& it, Clock::time_point now) const {
  return !it.awaiting_subgoal && !it.awaiting_action && it.wake_at <= now && !it.stack.empty();
}

bool AgentInstance::has_ready_work(Clock::time_point now, Clock::time_point& earliest) const {
  if (!events_.empty()) return true;
  bool ready = false;
  for (const auto& it : intentions_) {
    if (it.awaiting_subgoal || it.awaiting_action || it.stack.empty()) continue;
    if (it.wake_at <= now) ready = true;
    else earliest = std::min(earliest, it.wake_at);
  }
  return ready;
}

void AgentInstance::wait_for_work(Clock::time_point deadline) {
  Clock::time_point until = deadline;
  {
    std::lock_guard lock(state_mu_);
    if (has_ready_work(Clock::now(), until)) return;
  }
  std::unique_lock lock(inbox_->mu);
  inbox_->cv.wait_until(lock, until, [this] {
    return inbox_->stopped || !inbox_->mail.empty() || !inbox_->done.empty();
  });
}

void AgentInstance::apply_completion(std::uint64_t id, ActionOutcome outcome) {
  Intention* it = find(id);
  if (!it || !it->awaiting_action) return;
  if (outcome.error) {
    drop(id, "environment action failed: " + *outcome.error);
    return;
  }
  Frame& f = it->stack.back();
  if (it->out_var) {
    const Term value = outcome.value ? json_to_term(*outcome.value) : Term::atom("null");
    auto s = lang::unify(Term::variable(*it->out_var), value, f.subst);
    if (!s) {
      drop(id, "environment action result " + lang::to_source(value) + " does not match its output");
      return;
    }
    f.subst = std::move(*s);
  }
  it->awaiting_action = false;
  it->out_var.reset();
  ++f.pc;
  unwind(id);
}

void AgentInstance::execute_step(std::size_t index) {
  Intention& it = intentions_[index];
  const std::uint64_t id = it.id;
  Frame& f = it.stack.back();
  const BodyStep& st = f.body[f.pc];
  std::optional<std::string> error;

  switch (st.kind) {
    case BodyStep::Kind::kAchieve: {
      const Literal goal = lang::apply(f.subst, st.literal);
      it.awaiting_subgoal = true;
      events_.push_back(Event{TriggerKind::kGoalAdded, goal, id});
      return;
    }
    case BodyStep::Kind::kAddBelief:
    case BodyStep::Kind::kRemoveBelief: {
      const Literal l = lang::apply(f.subst, st.literal);
      if (!l.is_ground()) {
        error = "belief " + lang::to_source(l) + " is not ground";
        break;
      }
      update_belief(st.kind == BodyStep::Kind::kAddBelief, l);
      ++f.pc;
      break;
    }
    case BodyStep::Kind::kInternalAction:
      error = run_internal(it, f, st);
      break;
    case BodyStep::Kind::kEnvironmentAction:
      error = run_environment(it, f, st);
      break;
  }
  if (error) {
    drop(id, lang::to_source(apply_step(f.subst, st)) + ": " + *error);
    return;
  }
  unwind(id);
}

std::optional<std::string> AgentInstance::run_internal(Intention& it, Frame& f, const BodyStep& st) {
  const std::vector<Term> args = lang::apply(f.subst, st.args);
  const std::string& name = st.action;

  if (name == "send") {
    if (args.size() != 3) return "expects receiver, performative and content";
    std::optional<std::string> receiver;
    if (args[0].is_atom()) receiver = args[0].name();
    if (args[0].is_string()) receiver = args[0].text();
    if (!receiver) return "receiver must be an agent name";
    if (!args[1].is_atom() || (args[1].name() != "tell" && args[1].name() != "achieve"))
      return "performative must be tell or achieve";
    auto content = Literal::from_term(args[2]);
    if (!content || !content->is_ground()) return "message content must be a ground literal";
    Message m{name_, *receiver, args[1].name() == "tell" ? Performative::kTell : Performative::kAchieve,
              std::move(*content)};
    const std::string text = std::string(to_string(m.performative)) + " " + lang::to_source(m.content);
    if (!ctx_.send || !ctx_.send(m)) return "unknown receiver " + *receiver;
    log(LogLevel::kInfo, "sent " + text + " to " + *receiver);
    ++f.pc;
    return std::nullopt;
  }
  if (name == "print") {
    std::string text;
    for (const auto& a : args) text += display(a);
    log(LogLevel::kInfo, text);
    ++f.pc;
    return std::nullopt;
  }
  if (name == "wait") {
    if (args.size() != 1 || !args[0].is_number() || args[0].number() < 0)
      return "expects a non-negative number of milliseconds";
    it.wake_at = Clock::now() + std::chrono::microseconds(static_cast<std::int64_t>(args[0].number() * 1000.0));
    ++f.pc;
    return std::nullopt;
  }
  if (name == "json_get") {
    if (args.size() != 3) return "expects document, path and output";
    const auto doc = document_of(args[0]);
    if (!doc) return "document " + lang::to_source(args[0]) + " is not JSON data";
    const auto path = key_text(args[1]);
    if (!path) return "path must be a string";
    const auto value = json_path_get(*doc, *path);
    if (!value) return "path '" + *path + "' not found";
    auto s = lang::unify(args[2], json_to_term(*value), f.subst);
    if (!s) return "value at '" + *path + "' does not match";
    f.subst = std::move(*s);
    ++f.pc;
    return std::nullopt;
  }
  if (name == "json_build") {
    if (args.empty() || args.size() % 2 != 1) return "expects key/value pairs followed by an output";
    Json obj = Json::object();
    for (std::size_t i = 0; i + 1 < args.size(); i += 2) {
      const auto key = key_text(args[i]);
      if (!key) return "key " + lang::to_source(args[i]) + " is not a string";
      auto value = payload_to_json(args[i + 1]);
      if (!value) return "value " + lang::to_source(args[i + 1]) + " has no JSON form";
      obj[*key] = std::move(*value);
    }
    auto s = lang::unify(args.back(), Term::string(obj.dump()), f.subst);
    if (!s) return "output does not match";
    f.subst = std::move(*s);
    ++f.pc;
    return std::nullopt;
  }
  return "unknown internal action ." + name;
}

std::optional<std::string> AgentInstance::run_environment(Intention& it, Frame& f, const BodyStep& st) {
  if (!ctx_.dispatcher) return "no environment is attached to this run";
  EnvironmentRequest req{name_, st.action, lang::apply(f.subst, st.args)};
  if (!req.args.empty() && req.args.back().is_variable()) it.out_var = req.args.back().name();
  it.awaiting_action = true;
  const std::uint64_t id = it.id;
  std::weak_ptr<Inbox> inbox = inbox_;
  ctx_.dispatcher->dispatch(std::move(req), [inbox, id](ActionOutcome outcome) {
    auto box = inbox.lock();
    if (!box) return;
    {
      std::lock_guard lock(box->mu);
      if (box->stopped) return;
      box->done.emplace_back(id, std::move(outcome));
    }
    box->cv.notify_all();
  });
  return std::nullopt;
}

}  // namespace agentblocks::runtime
