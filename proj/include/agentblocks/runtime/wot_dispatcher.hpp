#pragma once

#include <atomic>
#include <list>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "agentblocks/runtime/agent.hpp"
#include "agentblocks/wot/client.hpp"
#include "agentblocks/wot/td.hpp"

namespace agentblocks::runtime {

/// Executes the `wot:readproperty`, `wot:writeproperty` and
/// `wot:invokeaction` environment actions through a WotClient, one worker
/// thread per request. Argument layouts:
///   readproperty(Href, Method, Out)
///   writeproperty(Href, Method, Value)
///   invokeaction(Href, Method, Payload [, Out])   Payload `null`: no body
/// When a known TD declares the (href, method) form, its content type,
/// security and schema apply; otherwise the request is sent as JSON.
class WotDispatcher : public ActionDispatcher {
 public:
  explicit WotDispatcher(std::vector<wot::ThingDescription> things = {}, wot::ClientOptions options = {});
  ~WotDispatcher() override;

  void dispatch(EnvironmentRequest request, ActionCallback done) override;
  void cancel_all() override;

  std::size_t in_flight() const;

 private:
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> finished;
  };

  ActionOutcome execute(const EnvironmentRequest& request);
  void reap_finished();

  std::vector<wot::ThingDescription> things_;
  wot::WotClient client_;
  mutable std::mutex mu_;
  std::list<Worker> workers_;
};

}  // namespace agentblocks::runtime
