#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace httplib {
class Server;
}

namespace agentblocks::http {

struct Address {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks an ephemeral port
};

// Accepts "host:port", ":port" and "port".
std::optional<Address> parse_address(std::string_view text);

/// Owns an httplib server and the thread that serves it.
class Host {
 public:
  Host();
  ~Host();
  Host(const Host&) = delete;
  Host& operator=(const Host&) = delete;

  httplib::Server& server() { return *server_; }

  // Returns the bound port, or -1 when binding failed.
  int bind(const Address& addr);
  int port() const { return port_; }
  std::string url() const;

  void start();  // serve on a background thread
  void run();    // serve on the calling thread until stop()
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_;
  int port_ = -1;
};

}  // namespace agentblocks::http
