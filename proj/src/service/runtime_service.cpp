#include "agentblocks/service/runtime_service.hpp"

#include <charconv>
#include <cstdlib>
#include <random>

#include <httplib.h>

#include "agentblocks/blocks/catalog.hpp"
#include "agentblocks/lang/printer.hpp"
#include "agentblocks/tdrepo/store.hpp"
#include "agentblocks/wot/client.hpp"

namespace agentblocks::service {

namespace fs = std::filesystem;
using tdrepo::atomic_write;
using tdrepo::is_workspace_name;
using tdrepo::read_file;

namespace {

std::string now_iso() { return runtime::iso8601(std::chrono::system_clock::now()); }

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message, Json extra = Json::object()) {
  extra["error"] = message;
  send_json(res, status, extra);
}

std::optional<Json> json_body(const httplib::Request& req, httplib::Response& res) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) {
    send_error(res, 400, "request body is not valid JSON");
    return std::nullopt;
  }
  return j;
}

bool is_json_request(const httplib::Request& req) {
  return !req.has_header("Content-Type") || wot::is_json_media_type(req.get_header_value("Content-Type"));
}

// PUT /agents accepts a template object, a bare blocks document, or
// non-JSON content as agent source text.
std::optional<AgentTemplate> template_from_request(const httplib::Request& req, httplib::Response& res) {
  if (!is_json_request(req)) return AgentTemplate{{}, SourceKind::kText, OrderedJson(req.body), {}};
  OrderedJson j = OrderedJson::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    send_error(res, 400, "request body must be a JSON object");
    return std::nullopt;
  }
  if (j.contains("formatVersion")) return AgentTemplate{{}, SourceKind::kBlocks, j, {}};
  try {
    return template_from_json(j);
  } catch (const std::invalid_argument& e) {
    send_error(res, 400, e.what());
    return std::nullopt;
  }
}

std::vector<std::string> json_names(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string stem = e.path().stem().string();
    if (e.is_regular_file() && e.path().extension() == ".json" && is_workspace_name(stem)) out.push_back(stem);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int explorer_status(const wot::AffordanceError& e) {
  using Kind = wot::AffordanceError::Kind;
  switch (e.kind()) {
    case Kind::kUnknownAffordance: return 404;
    case Kind::kNotSupported:
    case Kind::kSchemaMismatch: return 400;
    case Kind::kUnsupportedSecurity: return 403;
    default: return 502;
  }
}

}  // namespace

RuntimeConfig runtime_config_from_env() {
  RuntimeConfig c;
  if (const char* addr = std::getenv("RUNTIME_ADDR")) {
    auto a = http::parse_address(addr);
    if (!a) throw std::invalid_argument(std::string("invalid RUNTIME_ADDR: ") + addr);
    c.address = *a;
  }
  if (const char* data = std::getenv("RUNTIME_DATA")) c.data_dir = data;
  if (const char* max = std::getenv("RUNTIME_MAX_RUNS")) {
    std::size_t v = 0;
    const std::string_view s(max);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || v == 0)
      throw std::invalid_argument(std::string("invalid RUNTIME_MAX_RUNS: ") + max);
    c.max_runs = v;
  }
  if (const char* url = std::getenv("TDREPO_URL"); url && *url) c.tdrepo_url = url;
  return c;
}

RuntimeService::RuntimeService(RuntimeConfig config)
    : config_(std::move(config)),
      agents_dir_(config_.data_dir / "agents"),
      configs_dir_(config_.data_dir / "configs"),
      runs_dir_(config_.data_dir / "runs") {
  fs::create_directories(agents_dir_);
  fs::create_directories(configs_dir_);
  fs::create_directories(runs_dir_);
  // Half-executed intentions cannot be resumed: every earlier run is over.
  for (const auto& id : json_names(runs_dir_)) {
    auto text = read_file(runs_dir_ / (id + ".json"));
    Json record = text ? Json::parse(*text, nullptr, false) : Json();
    if (!record.is_object()) continue;
    if (record.value("status", "") == "running") {
      record["status"] = "stopped";
      record["stoppedAt"] = now_iso();
      record["stopReason"] = "service restarted";
    }
    Run run{record, nullptr, nullptr};
    persist(run);
    runs_.emplace(id, std::move(run));
  }
  install_routes();
}

RuntimeService::~RuntimeService() { stop(); }

void RuntimeService::stop() {
  host_.stop();
  std::lock_guard lock(runs_mu_);
  for (auto& [id, run] : runs_) stop_run(run);
}

std::optional<AgentTemplate> RuntimeService::load_template(const std::string& name) const {
  if (!is_workspace_name(name)) return std::nullopt;
  std::lock_guard lock(store_mu_);
  auto text = read_file(agents_dir_ / (name + ".json"));
  if (!text) return std::nullopt;
  try {
    auto t = template_from_json(OrderedJson::parse(*text));
    t.name = name;
    return t;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<RuntimeConfiguration> RuntimeService::load_configuration(const std::string& name) const {
  if (!is_workspace_name(name)) return std::nullopt;
  std::lock_guard lock(store_mu_);
  auto text = read_file(configs_dir_ / (name + ".json"));
  if (!text) return std::nullopt;
  try {
    return configuration_from_json(Json::parse(*text), name);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void RuntimeService::persist(const Run& run) const {
  atomic_write(runs_dir_ / (run.record["runId"].get<std::string>() + ".json"), run.record.dump(2) + "\n");
}

void RuntimeService::stop_run(Run& run) {
  if (!run.handle) return;
  run.handle->stop();
  run.record["messages"] = run.handle->messages_delivered();
  run.handle.reset();
  run.record["status"] = "stopped";
  run.record["stoppedAt"] = now_iso();
  persist(run);
}

std::size_t RuntimeService::running_count() const {
  std::size_t n = 0;
  for (const auto& [id, run] : runs_) n += run.handle != nullptr;
  return n;
}

Json RuntimeService::run_view(const Run& run) const {
  Json view = run.record;
  if (run.handle) view["messages"] = run.handle->messages_delivered();
  return view;
}

std::string RuntimeService::new_run_id() const {
  static std::mt19937_64 rng(std::random_device{}());
  static std::mutex mu;
  std::lock_guard lock(mu);
  for (;;) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "run-%08llx", static_cast<unsigned long long>(rng() & 0xffffffffULL));
    if (!runs_.count(buf) && !fs::exists(runs_dir_ / (std::string(buf) + ".json"))) return buf;
  }
}

void RuntimeService::install_routes() {
  auto& s = host_.server();

  // Browser clients (the block editor) call this API cross-origin.
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  // Templates.
  s.Get("/agents", [this](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& name : json_names(agents_dir_))
      if (auto t = load_template(name))
        out.push_back(Json{{"name", name}, {"sourceKind", to_string(t->kind)}, {"updatedAt", t->updated_at}});
    send_json(res, 200, out);
  });
  s.Get(R"(/agents/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto t = load_template(req.matches[1]);
    if (!t) return send_error(res, 404, "unknown agent template");
    res.set_content(to_json(*t).dump(), "application/json");
  });
  s.Put(R"(/agents/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    if (!is_workspace_name(name)) return send_error(res, 400, "invalid template name '" + name + "'");
    auto t = template_from_request(req, res);
    if (!t) return;
    t->name = name;
    CompiledTemplate compiled;
    try {
      compiled = compile_template(*t);
    } catch (const TemplateError& e) {
      return send_error(res, 400, e.what(), Json{{"diagnostics", e.diagnostics()}});
    }
    t->updated_at = now_iso();
    bool existed = false;
    {
      std::lock_guard lock(store_mu_);
      const fs::path file = agents_dir_ / (name + ".json");
      existed = fs::exists(file);
      atomic_write(file, to_json(*t).dump(2) + "\n");
    }
    send_json(res, existed ? 200 : 201,
              Json{{"name", name}, {"sourceKind", to_string(t->kind)}, {"updatedAt", t->updated_at},
                   {"source", compiled.source}});
  });
  s.Delete(R"(/agents/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    std::lock_guard lock(store_mu_);
    if (!is_workspace_name(name) || !fs::remove(agents_dir_ / (name + ".json")))
      return send_error(res, 404, "unknown agent template");
    res.status = 204;
  });

  s.Post("/compile", [](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto compiled = compile_blocks_text(req.body);
      send_json(res, 200, Json{{"source", compiled.source}, {"diagnostics", Json::array()}});
    } catch (const TemplateError& e) {
      send_json(res, 400, Json{{"source", nullptr}, {"diagnostics", e.diagnostics()}});
    }
  });

  // Configurations.
  s.Get("/configurations", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json_names(configs_dir_));
  });
  s.Get(R"(/configurations/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto c = load_configuration(req.matches[1]);
    if (!c) return send_error(res, 404, "unknown configuration");
    send_json(res, 200, to_json(*c));
  });
  s.Put(R"(/configurations/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    if (!is_workspace_name(name)) return send_error(res, 400, "invalid configuration name '" + name + "'");
    auto body = json_body(req, res);
    if (!body) return;
    RuntimeConfiguration c;
    try {
      c = configuration_from_json(*body, name);
    } catch (const ConfigError& e) {
      return send_error(res, 400, e.what());
    }
    bool existed = false;
    {
      std::lock_guard lock(store_mu_);
      const fs::path file = configs_dir_ / (name + ".json");
      existed = fs::exists(file);
      atomic_write(file, to_json(c).dump(2) + "\n");
    }
    Json view = to_json(c);
    Json instances = Json::array();
    for (const auto& [tpl, inst] : expand(c)) instances.push_back(Json{{"template", tpl}, {"name", inst}});
    view["instances"] = instances;
    send_json(res, existed ? 200 : 201, view);
  });
  s.Delete(R"(/configurations/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    std::lock_guard lock(store_mu_);
    if (!is_workspace_name(name) || !fs::remove(configs_dir_ / (name + ".json")))
      return send_error(res, 404, "unknown configuration");
    res.status = 204;
  });

  // Runs.
  s.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = json_body(req, res);
    if (!body) return;
    if (!body->is_object() || !body->contains("configuration") || !(*body)["configuration"].is_string())
      return send_error(res, 400, "body must name a configuration");
    const std::string cfg_name = (*body)["configuration"];
    auto cfg = load_configuration(cfg_name);
    if (!cfg) return send_error(res, 404, "unknown configuration '" + cfg_name + "'");

    std::lock_guard lock(runs_mu_);
    if (running_count() >= config_.max_runs)
      return send_error(res, 429, "at most " + std::to_string(config_.max_runs) + " concurrent runs");
    std::vector<runtime::AgentSpec> agents;
    try {
      agents = instantiate(*cfg, [this](const std::string& n) { return load_template(n); });
    } catch (const MissingTemplates& e) {
      return send_error(res, 409, e.what(), Json{{"missing", e.names()}});
    } catch (const TemplateError& e) {
      return send_error(res, 400, e.what(), Json{{"diagnostics", e.diagnostics()}});
    } catch (const ConfigError& e) {
      return send_error(res, 400, e.what());
    }
    Json names = Json::array();
    for (const auto& a : agents) names.push_back(a.name);

    const std::string id = new_run_id();
    LaunchOptions opts;
    opts.run_id = id;
    opts.tdrepo_url = config_.tdrepo_url;
    opts.client = config_.client;
    opts.log = std::make_shared<runtime::RunLog>(id);
    Run run;
    try {
      run.handle = launch(*cfg, std::move(agents), opts);
    } catch (const runtime::RunError& e) {
      return send_error(res, 400, e.what());
    }
    run.log = opts.log;
    run.record = Json{{"runId", id},           {"configuration", cfg_name}, {"status", "running"},
                      {"startedAt", now_iso()}, {"agents", names}};
    persist(run);
    runs_.emplace(id, std::move(run));
    send_json(res, 201, Json{{"runId", id}, {"agents", names}});
  });
  s.Get("/runs", [this](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(runs_mu_);
    Json out = Json::array();
    for (const auto& [id, run] : runs_) out.push_back(run_view(run));
    send_json(res, 200, out);
  });
  s.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(runs_mu_);
    auto it = runs_.find(req.matches[1]);
    if (it == runs_.end()) return send_error(res, 404, "unknown run");
    send_json(res, 200, run_view(it->second));
  });
  s.Delete(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(runs_mu_);
    auto it = runs_.find(req.matches[1]);
    if (it == runs_.end()) return send_error(res, 404, "unknown run");
    if (!it->second.handle) return send_error(res, 410, "run already stopped");
    stop_run(it->second);
    send_json(res, 200, run_view(it->second));
  });
  s.Get(R"(/runs/([^/]+)/agents)", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(runs_mu_);
    auto it = runs_.find(req.matches[1]);
    if (it == runs_.end()) return send_error(res, 404, "unknown run");
    send_json(res, 200, it->second.record.value("agents", Json::array()));
  });
  s.Get(R"(/runs/([^/]+)/agents/([^/]+)/beliefs)", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(runs_mu_);
    auto it = runs_.find(req.matches[1]);
    if (it == runs_.end()) return send_error(res, 404, "unknown run");
    if (!it->second.handle) return send_error(res, 410, "run is stopped");
    auto beliefs = it->second.handle->beliefs(req.matches[2]);
    if (!beliefs) return send_error(res, 404, "unknown agent");
    Json out = Json::array();
    for (const auto& b : *beliefs) out.push_back(lang::to_source(b));
    send_json(res, 200, out);
  });
  s.Get(R"(/runs/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<runtime::RunLog> log;
    {
      std::lock_guard lock(runs_mu_);
      auto it = runs_.find(req.matches[1]);
      if (it == runs_.end()) return send_error(res, 404, "unknown run");
      if (!it->second.log) return send_error(res, 410, "log of this run is no longer available");
      log = it->second.log;
    }
    std::size_t since = 0;
    if (req.has_param("since")) {
      const std::string v = req.get_param_value("since");
      auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), since);
      if (ec != std::errc() || end != v.data() + v.size())
        return send_error(res, 400, "since must be a non-negative integer");
    }
    const auto page = log->since(since);
    send_json(res, 200, Json{{"lines", page.lines}, {"next", page.next}});
  });

  // Block palette: static categories plus one per thing in the workspace.
  s.Get("/catalog", [this](const httplib::Request& req, httplib::Response& res) {
    blocks::BlockCatalog catalog = blocks::BlockCatalog::standard();
    Json warnings = Json::array();
    if (req.has_param("workspace")) {
      if (!config_.tdrepo_url) {
        warnings.push_back("no TD repository configured");
      } else {
        try {
          auto tds = wot::fetch_workspace_tds(*config_.tdrepo_url, req.get_param_value("workspace"), config_.client);
          for (const auto& w : tds.warnings) warnings.push_back(w);
          for (const auto& td : tds.things) {
            auto cat = blocks::blocks_from_td(td);
            for (const auto& d : cat.warnings) warnings.push_back(d.message);
            try {
              catalog.add_category(std::move(cat.category));
            } catch (const std::invalid_argument& e) {
              warnings.push_back(e.what());
            }
          }
        } catch (const std::exception& e) {
          warnings.push_back(std::string("TD repository unavailable: ") + e.what());
        }
      }
    }
    Json out = blocks::to_json(catalog);
    out["warnings"] = warnings;
    send_json(res, 200, out);
  });

  // Thing Explorer: manual affordance invocation through the WoT client.
  s.Post(R"(/explorer/(read|write|invoke))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string op = req.matches[1];
    auto body = json_body(req, res);
    if (!body) return;
    if (!body->is_object() || !(*body).contains("workspace") || !(*body)["workspace"].is_string() ||
        !(*body).contains("thing") || !(*body)["thing"].is_string() || !(*body).contains("name") ||
        !(*body)["name"].is_string())
      return send_error(res, 400, "body needs workspace, thing and name strings");
    if (!config_.tdrepo_url) return send_error(res, 503, "no TD repository configured");
    std::optional<wot::ThingDescription> td;
    try {
      auto tds = wot::fetch_workspace_tds(*config_.tdrepo_url, (*body)["workspace"].get<std::string>(), config_.client);
      for (auto& t : tds.things)
        if (t.id == (*body)["thing"]) td = std::move(t);
    } catch (const wot::RepositoryError& e) {
      return send_error(res, e.status() == 404 ? 404 : 502, e.what());
    }
    if (!td) return send_error(res, 404, "unknown thing");
    const std::string name = (*body)["name"];
    std::optional<Json> payload;
    if (body->contains("payload")) payload = (*body)["payload"];
    wot::WotClient client(config_.client);
    try {
      std::optional<Json> value;
      if (op == "read") value = client.read_property(*td, name);
      else if (op == "write") {
        if (!payload) return send_error(res, 400, "write needs a payload");
        value = client.write_property(*td, name, *payload);
      } else {
        value = client.invoke_action(*td, name, payload);
      }
      send_json(res, 200, Json{{"value", value ? *value : Json(nullptr)}});
    } catch (const wot::AffordanceError& e) {
      send_error(res, explorer_status(e), e.what(), Json{{"status", e.status()}, {"body", e.body()}});
    }
  });
}

}  // namespace agentblocks::service
