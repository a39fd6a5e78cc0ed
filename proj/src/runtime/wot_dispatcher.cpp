#include "agentblocks/runtime/wot_dispatcher.hpp"

#include "agentblocks/lang/printer.hpp"

namespace agentblocks::runtime {

namespace {

struct KnownForm {
  const wot::ThingDescription* td = nullptr;
  std::string content_type = "application/json";
  const wot::DataSchema* schema = nullptr;  // payload schema, when declared
};

std::optional<KnownForm> lookup(const std::vector<wot::ThingDescription>& things, std::string_view op,
                                const std::string& href, const std::string& method) {
  for (const auto& td : things) {
    if (op == "invokeaction") {
      for (const auto& a : td.actions) {
        auto f = a.form_for(op);
        if (f && f->href == href && f->method == method)
          return KnownForm{&td, f->content_type, a.input ? &*a.input : nullptr};
      }
    } else {
      for (const auto& p : td.properties) {
        auto f = p.form_for(op);
        if (f && f->href == href && f->method == method)
          return KnownForm{&td, f->content_type, op == "writeproperty" ? &p.schema : nullptr};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

WotDispatcher::WotDispatcher(std::vector<wot::ThingDescription> things, wot::ClientOptions options)
    : things_(std::move(things)), client_(options) {}

WotDispatcher::~WotDispatcher() {
  cancel_all();
  std::list<Worker> workers;
  {
    std::lock_guard lock(mu_);
    workers.swap(workers_);
  }
  for (auto& w : workers)
    if (w.thread.joinable()) w.thread.join();
}

void WotDispatcher::cancel_all() { client_.cancel_all(); }

std::size_t WotDispatcher::in_flight() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& w : workers_) n += !w.finished->load();
  return n;
}

void WotDispatcher::reap_finished() {
  std::list<Worker> done;
  {
    std::lock_guard lock(mu_);
    for (auto it = workers_.begin(); it != workers_.end();) {
      auto next = std::next(it);
      if (it->finished->load()) done.splice(done.end(), workers_, it);
      it = next;
    }
  }
  for (auto& w : done) w.thread.join();
}

void WotDispatcher::dispatch(EnvironmentRequest request, ActionCallback done) {
  reap_finished();
  auto finished = std::make_shared<std::atomic<bool>>(false);
  std::lock_guard lock(mu_);
  workers_.push_back(Worker{std::thread([this, finished, request = std::move(request), done = std::move(done)] {
                              ActionOutcome outcome = execute(request);
                              done(std::move(outcome));
                              finished->store(true);
                            }),
                            finished});
}

ActionOutcome WotDispatcher::execute(const EnvironmentRequest& request) {
  const std::string prefix = "wot:";
  if (request.action.rfind(prefix, 0) != 0) return ActionOutcome::failure("unknown environment action " + request.action);
  const std::string op = request.action.substr(prefix.size());
  const auto& args = request.args;
  if (op != "readproperty" && op != "writeproperty" && op != "invokeaction")
    return ActionOutcome::failure("unknown environment action " + request.action);
  if (args.size() < 3 || args.size() > (op == "invokeaction" ? 4u : 3u))
    return ActionOutcome::failure(request.action + " has the wrong number of arguments");
  if (!args[0].is_string() || !args[1].is_string())
    return ActionOutcome::failure(request.action + " expects href and method strings");
  const std::string& href = args[0].text();
  const std::string& method = args[1].text();

  std::optional<Json> payload;
  if (op == "writeproperty" || (op == "invokeaction" && !(args[2].is_atom() && args[2].name() == "null"))) {
    payload = payload_to_json(args[2]);
    if (!payload) return ActionOutcome::failure("payload " + lang::to_source(args[2]) + " has no JSON form");
  }

  std::string content_type = "application/json";
  if (auto known = lookup(things_, op, href, method)) {
    if (!known->td->invocable)
      return ActionOutcome::failure("thing '" + known->td->title + "' requires an unsupported security scheme");
    if (payload && known->schema && !wot::conforms(*known->schema, *payload))
      return ActionOutcome::failure("payload " + payload->dump() + " does not conform to the declared schema");
    content_type = known->content_type;
  }

  try {
    return ActionOutcome::success(client_.call(method, href, payload, content_type));
  } catch (const wot::AffordanceError& e) {
    std::string msg = e.what();
    if (e.kind() == wot::AffordanceError::Kind::kHttpStatus && !e.body().empty()) msg += ": " + e.body();
    return ActionOutcome::failure(msg);
  } catch (const std::exception& e) {
    return ActionOutcome::failure(e.what());
  }
}

}  // namespace agentblocks::runtime
