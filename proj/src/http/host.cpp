#include "agentblocks/http/host.hpp"

#include <charconv>

#include <httplib.h>

namespace agentblocks::http {

std::optional<Address> parse_address(std::string_view text) {
  Address a;
  std::string_view port = text;
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) a.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  int value = -1;
  auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || end != port.data() + port.size() || value < 0 || value > 65535) return std::nullopt;
  a.port = value;
  return a;
}

// Reuses TIME_WAIT addresses but, unlike the library default, refuses a port
// that another live listener holds.
Host::Host() : server_(std::make_unique<httplib::Server>()) {
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
}

Host::~Host() { stop(); }

int Host::bind(const Address& addr) {
  host_ = addr.host;
  if (addr.port == 0) {
    port_ = server_->bind_to_any_port(addr.host);
  } else {
    port_ = server_->bind_to_port(addr.host, addr.port) ? addr.port : -1;
  }
  return port_;
}

std::string Host::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

void Host::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void Host::run() { server_->listen_after_bind(); }

void Host::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace agentblocks::http
