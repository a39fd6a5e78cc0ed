#pragma once

#include <filesystem>

#include "agentblocks/http/host.hpp"
#include "agentblocks/tdrepo/store.hpp"

namespace agentblocks::tdrepo {

struct TdRepoConfig {
  http::Address address{"127.0.0.1", 8081};
  std::filesystem::path data_dir = "data";
};

// Defaults overridden by TDREPO_ADDR and TDREPO_DATA. Throws
// std::invalid_argument for a malformed address.
TdRepoConfig tdrepo_config_from_env();

/// HTTP front end of a TdStore:
///   PUT|DELETE /workspaces/{ws}, GET /workspaces,
///   GET|POST /workspaces/{ws}/things, GET|DELETE /workspaces/{ws}/things/{id}
class TdRepoService {
 public:
  explicit TdRepoService(std::filesystem::path data_dir);

  int bind(const http::Address& addr) { return host_.bind(addr); }
  std::string url() const { return host_.url(); }
  void start() { host_.start(); }
  void run() { host_.run(); }
  void stop() { host_.stop(); }

  TdStore& store() { return store_; }

 private:
  TdStore store_;
  http::Host host_;
};

}  // namespace agentblocks::tdrepo
