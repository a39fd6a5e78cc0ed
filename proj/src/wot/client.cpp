#include "agentblocks/wot/client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "agentblocks/wot/uri.hpp"

namespace agentblocks::wot {

using Kind = AffordanceError::Kind;

bool is_json_media_type(std::string_view content_type) {
  std::string ct(content_type.substr(0, content_type.find(';')));
  ct.erase(std::remove_if(ct.begin(), ct.end(), [](unsigned char c) { return std::isspace(c); }), ct.end());
  std::transform(ct.begin(), ct.end(), ct.begin(), [](unsigned char c) { return std::tolower(c); });
  return ct == "application/json" || (ct.size() > 5 && ct.compare(ct.size() - 5, 5, "+json") == 0);
}

namespace {

void configure(httplib::Client& c, const ClientOptions& o) {
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(o.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(o.timeout - secs);
  c.set_connection_timeout(secs.count(), usecs.count());
  c.set_read_timeout(secs.count(), usecs.count());
  c.set_write_timeout(secs.count(), usecs.count());
  c.set_keep_alive(false);
}

// Unified transport for thing and repository requests.
httplib::Result send(httplib::Client& c, const std::string& method, const std::string& path,
                     const httplib::Headers& headers, const std::string& body, const std::string& content_type,
                     bool has_body) {
  httplib::Request req;
  req.method = method;
  req.path = path;
  req.headers = headers;
  if (has_body) {
    req.body = body;
    req.set_header("Content-Type", content_type);
  }
  return c.send(req);
}

std::string http_reason(const httplib::Result& r) { return httplib::to_string(r.error()); }

}  // namespace

std::optional<Json> WotClient::call(std::string_view method, std::string_view href,
                                    const std::optional<Json>& payload, std::string_view content_type) {
  const auto endpoint = split_http_uri(href);
  if (!endpoint) throw AffordanceError(Kind::kNotSupported, "not an absolute http(s) URI: " + std::string(href));

  const bool json_form = is_json_media_type(content_type);
  std::string body;
  if (payload) body = (!json_form && payload->is_string()) ? payload->get<std::string>() : payload->dump();

  httplib::Client client(endpoint->origin);
  if (!client.is_valid()) throw AffordanceError(Kind::kNotSupported, "unsupported endpoint " + endpoint->origin);
  configure(client, options_);
  {
    std::lock_guard lock(mu_);
    if (cancelled_) throw AffordanceError(Kind::kCancelled, "client cancelled");
    active_.insert(&client);
  }
  struct Unregister {
    WotClient* self;
    httplib::Client* c;
    ~Unregister() {
      std::lock_guard lock(self->mu_);
      self->active_.erase(c);
    }
  } unregister{this, &client};

  const httplib::Headers headers = {{"Accept", "application/json"}};
  const std::string m(method);
  httplib::Result res = send(client, m, endpoint->path_and_query, headers, body, std::string(content_type), payload.has_value());
  for (int retry = 0; !res && res.error() == httplib::Error::Connection && retry < options_.connection_retries; ++retry) {
    {
      std::lock_guard lock(mu_);
      if (cancelled_) break;
    }
    res = send(client, m, endpoint->path_and_query, headers, body, std::string(content_type), payload.has_value());
  }
  {
    std::lock_guard lock(mu_);
    if (cancelled_) throw AffordanceError(Kind::kCancelled, "request cancelled: " + m + " " + std::string(href));
  }
  if (!res) throw AffordanceError(Kind::kNetwork, m + " " + std::string(href) + " failed: " + http_reason(res));
  if (res->status < 200 || res->status >= 300)
    throw AffordanceError(Kind::kHttpStatus, m + " " + std::string(href) + " returned " + std::to_string(res->status),
                          res->status, res->body);
  if (res->body.empty()) return std::nullopt;
  Json parsed = Json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) {
    if (json_form) throw AffordanceError(Kind::kBadResponse, "response from " + std::string(href) + " is not JSON");
    return Json(res->body);
  }
  return parsed;
}

void WotClient::cancel_all() {
  std::lock_guard lock(mu_);
  cancelled_ = true;
  for (httplib::Client* c : active_) c->stop();
}

Json WotClient::read_property(const ThingDescription& td, std::string_view name) {
  const PropertyAffordance* p = td.find_property(name);
  if (!p) throw AffordanceError(Kind::kUnknownAffordance, "unknown property '" + std::string(name) + "'");
  if (!td.invocable) throw AffordanceError(Kind::kUnsupportedSecurity, "thing requires unsupported security");
  const auto form = p->form_for("readproperty");
  if (!form) throw AffordanceError(Kind::kNotSupported, "property '" + std::string(name) + "' is not readable");
  auto out = call(form->method, form->href, std::nullopt, form->content_type);
  if (!out) throw AffordanceError(Kind::kBadResponse, "empty response reading '" + std::string(name) + "'");
  return *out;
}

std::optional<Json> WotClient::write_property(const ThingDescription& td, std::string_view name, const Json& payload) {
  const PropertyAffordance* p = td.find_property(name);
  if (!p) throw AffordanceError(Kind::kUnknownAffordance, "unknown property '" + std::string(name) + "'");
  if (!p->writable) throw AffordanceError(Kind::kNotSupported, "property '" + std::string(name) + "' is not writable");
  if (!conforms(p->schema, payload))
    throw AffordanceError(Kind::kSchemaMismatch, "payload does not match " + std::string(to_string(p->schema.type)) +
                                                     " schema of '" + std::string(name) + "'");
  if (!td.invocable) throw AffordanceError(Kind::kUnsupportedSecurity, "thing requires unsupported security");
  const auto form = p->form_for("writeproperty");
  return call(form->method, form->href, payload, form->content_type);
}

std::optional<Json> WotClient::invoke_action(const ThingDescription& td, std::string_view name,
                                             const std::optional<Json>& payload) {
  const ActionAffordance* a = td.find_action(name);
  if (!a) throw AffordanceError(Kind::kUnknownAffordance, "unknown action '" + std::string(name) + "'");
  if (payload && a->input && !conforms(*a->input, *payload))
    throw AffordanceError(Kind::kSchemaMismatch, "input does not match " + std::string(to_string(a->input->type)) +
                                                     " schema of '" + std::string(name) + "'");
  if (!td.invocable) throw AffordanceError(Kind::kUnsupportedSecurity, "thing requires unsupported security");
  const auto form = a->form_for("invokeaction");
  if (!form) throw AffordanceError(Kind::kNotSupported, "action '" + std::string(name) + "' has no invoke form");
  return call(form->method, form->href, payload, form->content_type);
}

namespace {

nlohmann::ordered_json repo_get(httplib::Client& c, const std::string& path, int retries) {
  const httplib::Headers headers = {{"Accept", "application/json"}};
  httplib::Result res = send(c, "GET", path, headers, {}, {}, false);
  for (int i = 0; !res && res.error() == httplib::Error::Connection && i < retries; ++i)
    res = send(c, "GET", path, headers, {}, {}, false);
  if (!res) throw RepositoryError("repository unreachable: " + http_reason(res), 0);
  if (res->status != 200) throw RepositoryError("GET " + path + " returned " + std::to_string(res->status), res->status);
  auto doc = nlohmann::ordered_json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) throw RepositoryError("GET " + path + " returned non-JSON body", res->status);
  return doc;
}

}  // namespace

WorkspaceTds fetch_workspace_tds(std::string_view repo_url, std::string_view workspace, ClientOptions options) {
  std::string base(repo_url);
  while (!base.empty() && base.back() == '/') base.pop_back();
  const auto endpoint = split_http_uri(base + "/");
  if (!endpoint) throw RepositoryError("invalid repository URL " + std::string(repo_url), 0);
  std::string prefix = endpoint->path_and_query;
  if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  prefix += "/workspaces/" + percent_encode(workspace) + "/things";

  httplib::Client client(endpoint->origin);
  configure(client, options);
  const auto listing = repo_get(client, prefix, options.connection_retries);
  if (!listing.is_array()) throw RepositoryError("workspace listing is not an array", 200);

  WorkspaceTds out;
  for (std::size_t i = 0; i < listing.size(); ++i) {
    nlohmann::ordered_json entry = listing[i];
    if (entry.is_string()) {
      const std::string id = entry.get<std::string>();
      try {
        entry = repo_get(client, prefix + "/" + percent_encode(id), options.connection_retries);
      } catch (const RepositoryError& e) {
        if (e.status() == 0) throw;
        out.warnings.push_back("thing '" + id + "': " + e.what());
        continue;
      }
    }
    TdParseResult r = parse_td_json(entry);
    if (!r.ok()) {
      std::string msg = "entry " + std::to_string(i) + " is not a valid TD";
      for (const auto& d : r.errors()) msg += ": " + d.message;
      out.warnings.push_back(msg);
      continue;
    }
    for (const auto& w : r.warnings()) out.warnings.push_back(r.td->title + ": " + w.message);
    out.things.push_back(std::move(*r.td));
  }
  return out;
}

}  // namespace agentblocks::wot
