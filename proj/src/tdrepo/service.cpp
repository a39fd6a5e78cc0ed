#include "agentblocks/tdrepo/service.hpp"

#include <cstdlib>

#include <httplib.h>

#include "agentblocks/wot/td.hpp"
#include "agentblocks/wot/uri.hpp"

namespace agentblocks::tdrepo {

namespace {

using Json = nlohmann::json;

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, Json{{"error", message}});
}

}  // namespace

TdRepoConfig tdrepo_config_from_env() {
  TdRepoConfig c;
  if (const char* addr = std::getenv("TDREPO_ADDR")) {
    auto a = http::parse_address(addr);
    if (!a) throw std::invalid_argument(std::string("invalid TDREPO_ADDR: ") + addr);
    c.address = *a;
  }
  if (const char* data = std::getenv("TDREPO_DATA")) c.data_dir = data;
  return c;
}

TdRepoService::TdRepoService(std::filesystem::path data_dir) : store_(std::move(data_dir)) {
  auto& s = host_.server();
  TdStore& store = store_;

  s.Get("/workspaces", [&store](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, store.workspaces());
  });
  s.Put(R"(/workspaces/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string ws = req.matches[1];
    if (!is_workspace_name(ws)) return send_error(res, 400, "invalid workspace name '" + ws + "'");
    const bool created = store.create_workspace(ws);
    send_json(res, created ? 201 : 200, Json{{"name", ws}});
  });
  s.Delete(R"(/workspaces/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    if (!store.delete_workspace(req.matches[1].str())) return send_error(res, 404, "unknown workspace");
    res.status = 204;
  });
  s.Get(R"(/workspaces/([^/]+)/things)", [&store](const httplib::Request& req, httplib::Response& res) {
    auto bodies = store.things(req.matches[1].str());
    if (!bodies) return send_error(res, 404, "unknown workspace");
    // Joined verbatim so every element is byte-identical to its upload.
    std::string out = "[";
    for (std::size_t i = 0; i < bodies->size(); ++i) {
      if (i) out += ",\n";
      out += (*bodies)[i];
    }
    out += "]";
    res.set_content(out, "application/json");
  });
  s.Post(R"(/workspaces/([^/]+)/things)", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string ws = req.matches[1];
    if (!store.has_workspace(ws)) return send_error(res, 404, "unknown workspace");
    const auto parsed = wot::parse_td(req.body);
    if (!parsed.ok())
      return send_json(res, 400,
                       Json{{"error", "invalid thing description"},
                            {"diagnostics", wot::diagnostics_to_json(parsed.diagnostics)}});
    const std::string& id = parsed.td->id;
    switch (store.add_thing(ws, id, req.body)) {
      case TdStore::PutResult::kNoWorkspace: return send_error(res, 404, "unknown workspace");
      case TdStore::PutResult::kDuplicate: return send_error(res, 409, "thing '" + id + "' already exists");
      case TdStore::PutResult::kCreated: break;
    }
    const std::string location = "/workspaces/" + ws + "/things/" + wot::percent_encode(id);
    res.set_header("Location", location);
    send_json(res, 201,
              Json{{"id", id}, {"location", location}, {"warnings", wot::diagnostics_to_json(parsed.warnings())}});
  });
  s.Get(R"(/workspaces/([^/]+)/things/(.+))", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string ws = req.matches[1];
    if (!store.has_workspace(ws)) return send_error(res, 404, "unknown workspace");
    auto body = store.thing(ws, req.matches[2].str());
    if (!body) return send_error(res, 404, "unknown thing");
    res.set_content(*body, "application/json");
  });
  s.Delete(R"(/workspaces/([^/]+)/things/(.+))", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string ws = req.matches[1];
    if (!store.has_workspace(ws)) return send_error(res, 404, "unknown workspace");
    if (!store.delete_thing(ws, req.matches[2].str())) return send_error(res, 404, "unknown thing");
    res.status = 204;
  });
}

}  // namespace agentblocks::tdrepo
