#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agentblocks/wot/td.hpp"

namespace httplib {
class Client;
}

namespace agentblocks::wot {

class AffordanceError : public std::runtime_error {
 public:
  enum class Kind {
    kUnknownAffordance,
    kNotSupported,
    kSchemaMismatch,
    kUnsupportedSecurity,
    kHttpStatus,
    kNetwork,
    kBadResponse,
    kCancelled,
  };

  AffordanceError(Kind kind, const std::string& message, int status = 0, std::string body = {})
      : std::runtime_error(message), kind_(kind), status_(status), body_(std::move(body)) {}

  Kind kind() const { return kind_; }
  int status() const { return status_; }  // 0 unless kHttpStatus
  const std::string& body() const { return body_; }

 private:
  Kind kind_;
  int status_;
  std::string body_;
};

struct ClientOptions {
  std::chrono::milliseconds timeout{10000};
  int connection_retries = 1;  // only when the connection could not be established
};

bool is_json_media_type(std::string_view content_type);

// Thread-safe. Every request carries Accept: application/json; requests with
// a body also carry the form's Content-Type.
class WotClient {
 public:
  explicit WotClient(ClientOptions options = {}) : options_(options) {}
  WotClient(const WotClient&) = delete;
  WotClient& operator=(const WotClient&) = delete;

  Json read_property(const ThingDescription& td, std::string_view name);
  std::optional<Json> write_property(const ThingDescription& td, std::string_view name, const Json& payload);
  std::optional<Json> invoke_action(const ThingDescription& td, std::string_view name,
                                    const std::optional<Json>& payload = std::nullopt);

  // One request to exactly this href and method. Returns the parsed body, or
  // nullopt when the response has none.
  std::optional<Json> call(std::string_view method, std::string_view href, const std::optional<Json>& payload,
                           std::string_view content_type = "application/json");

  // Aborts in-flight requests; every later request fails with kCancelled.
  void cancel_all();

 private:
  ClientOptions options_;
  std::mutex mu_;
  std::set<httplib::Client*> active_;
  bool cancelled_ = false;
};

class RepositoryError : public std::runtime_error {
 public:
  RepositoryError(const std::string& message, int status) : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }  // 0 when the repository was unreachable

 private:
  int status_;
};

struct WorkspaceTds {
  std::vector<ThingDescription> things;
  std::vector<std::string> warnings;
};

// Lists the workspace, then parses each entry. Entries may be embedded TD
// documents or thing ids to fetch individually. Unparseable entries become
// warnings.
WorkspaceTds fetch_workspace_tds(std::string_view repo_url, std::string_view workspace, ClientOptions options = {});

}  // namespace agentblocks::wot
