#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace agentblocks::testing {

// A loopback TCP port with nothing listening on it.
int unused_port();

struct RecordedRequest {
  std::string method;
  std::string path;
  std::string content_type;  // empty when the header is absent
  std::string accept;
  std::string body;
};

/// A lamp thing on 127.0.0.1 with one boolean property `on` and one action
/// `toggle`. Reads answer {"value": <bool>}; writes take a bare boolean.
/// Extra routes outside the TD: /fail (500), /plain (text/plain body),
/// /notjson (malformed body declared as JSON) and /slow (sleeps).
class MockLamp {
 public:
  explicit MockLamp(bool on = false);
  ~MockLamp();
  MockLamp(const MockLamp&) = delete;
  MockLamp& operator=(const MockLamp&) = delete;

  int port() const { return port_; }
  std::string base_url() const;  // http://127.0.0.1:<port>
  std::string href(const std::string& path) const { return base_url() + path; }
  // TD document text with absolute form hrefs.
  std::string td() const;

  bool on() const { return on_.load(); }
  void set_on(bool v) { on_.store(v); }

  std::vector<RecordedRequest> requests() const;
  void clear_requests();

 private:
  void record(const RecordedRequest& r);

  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<bool> on_;
  std::atomic<bool> closing_{false};
  mutable std::mutex mu_;
  std::vector<RecordedRequest> log_;
};

}  // namespace agentblocks::testing
