#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace agentblocks::wot {

// Generic URI components; absent authority/query/fragment differ from empty ones.
struct UriParts {
  std::string scheme;
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;
};

std::optional<UriParts> parse_uri_reference(std::string_view s);
std::string to_string(const UriParts& u);

// Reference resolution against an absolute base. Returns nullopt when the
// base is not absolute or either input is malformed.
std::optional<std::string> resolve_uri(std::string_view base, std::string_view reference);

bool is_absolute_http_uri(std::string_view s);

// Splits an absolute http(s) URI into what an HTTP client needs.
struct HttpEndpoint {
  std::string origin;           // scheme://host[:port]
  std::string path_and_query;   // never empty; "/" when the path is empty
};
std::optional<HttpEndpoint> split_http_uri(std::string_view s);

// Percent-encodes everything outside the unreserved set.
std::string percent_encode(std::string_view s);
std::optional<std::string> percent_decode(std::string_view s);

}  // namespace agentblocks::wot
