#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "agentblocks/service/launch.hpp"
#include "agentblocks/service/runtime_service.hpp"
#include "agentblocks/tdrepo/service.hpp"
#include "agentblocks/wot/td.hpp"

namespace fs = std::filesystem;
using namespace agentblocks;

namespace {

enum Exit { kOk = 0, kDiagnostics = 1, kIo = 2, kNetwork = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// One line per diagnostic: file:position: severity code: message.
void print_diagnostics(const std::string& file, const service::Json& diagnostics) {
  for (const auto& d : diagnostics) {
    std::string where = file;
    if (d.contains("line")) where += ":" + std::to_string(d["line"].get<int>()) + ":" + std::to_string(d["column"].get<int>());
    if (d.contains("blockId") && d["blockId"].is_string()) where += ": block " + d["blockId"].get<std::string>();
    if (d.contains("path") && d["path"].is_string() && !d["path"].get<std::string>().empty())
      where += ": " + d["path"].get<std::string>();
    std::cerr << where << ": " << d.value("severity", "error") << " " << d.value("code", "Error") << ": "
              << d.value("message", "") << "\n";
  }
}

service::CompiledTemplate compile_file(const fs::path& in) {
  const std::string text = read_file(in);
  if (ends_with(in.string(), ".asl")) return service::compile_source_text(text);
  return service::compile_blocks_text(text);
}

int cmd_compile(const fs::path& in, const std::optional<fs::path>& out) {
  const auto compiled = compile_file(in);
  if (!out) {
    std::cout << compiled.source;
    return kOk;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!(f << compiled.source)) throw IoError("cannot write " + out->string());
  return kOk;
}

int cmd_check(const fs::path& in) {
  const auto compiled = compile_file(in);
  std::cout << in.string() << ": ok (" << compiled.program.plans.size() << " plans)\n";
  return kOk;
}

int cmd_td_validate(const fs::path& in) {
  const auto result = wot::parse_td(read_file(in));
  for (const auto& d : result.diagnostics)
    std::cerr << in.string() << ": " << (d.severity == wot::TdDiagnostic::Severity::kError ? "error" : "warning")
              << " at " << (d.path.empty() ? "/" : d.path) << ": " << d.message << "\n";
  if (!result.ok()) return kDiagnostics;
  std::cout << in.string() << ": ok (" << result.td->properties.size() << " properties, " << result.td->actions.size()
            << " actions)\n";
  return kOk;
}

// Blocks SIGINT and SIGTERM in every thread so the caller can sigwait.
sigset_t block_stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void wait_for_stop_signal(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

// Templates live beside the configuration as <name>.blocks.json or <name>.asl.
std::optional<service::AgentTemplate> load_beside(const fs::path& dir, const std::string& name) {
  service::AgentTemplate t;
  t.name = name;
  if (const auto blocks = dir / (name + ".blocks.json"); fs::exists(blocks)) {
    t.kind = service::SourceKind::kBlocks;
    t.body = service::OrderedJson::parse(read_file(blocks), nullptr, false);
    if (t.body.is_discarded()) t.body = read_file(blocks);
    return t;
  }
  if (const auto asl = dir / (name + ".asl"); fs::exists(asl)) {
    t.kind = service::SourceKind::kText;
    t.body = read_file(asl);
    return t;
  }
  return std::nullopt;
}

int cmd_run(const fs::path& config_path, const std::optional<std::string>& td_repo, bool verbose) {
  const auto doc = service::Json::parse(read_file(config_path), nullptr, false);
  if (doc.is_discarded()) {
    std::cerr << config_path.string() << ": error: configuration is not valid JSON\n";
    return kDiagnostics;
  }
  auto config = service::configuration_from_json(doc, config_path.stem().string());
  const fs::path dir = config_path.parent_path().empty() ? fs::path(".") : config_path.parent_path();
  auto agents = service::instantiate(config, [&](const std::string& n) { return load_beside(dir, n); });

  const sigset_t signals = block_stop_signals();
  service::LaunchOptions options;
  options.run_id = "local";
  options.tdrepo_url = td_repo;
  options.log = std::make_shared<runtime::RunLog>(options.run_id);
  if (!verbose) options.log->set_min_level(runtime::LogLevel::kInfo);
  options.log->set_sink([](const std::string& line) { std::cout << line << std::endl; });
  auto run = service::launch(config, std::move(agents), std::move(options));
  wait_for_stop_signal(signals);
  run->stop();
  return kOk;
}

http::Address parse_addr(const std::string& text) {
  const auto a = http::parse_address(text);
  if (!a) throw std::invalid_argument("malformed address '" + text + "'");
  return *a;
}

template <typename Service>
int serve(Service& s, const http::Address& addr) {
  const sigset_t signals = block_stop_signals();
  if (s.bind(addr) < 0) {
    std::cerr << "cannot listen on " << addr.host << ":" << addr.port << "\n";
    return kNetwork;
  }
  s.start();
  std::cout << "listening on " << s.url() << std::endl;
  wait_for_stop_signal(signals);
  s.stop();
  return kOk;
}

int cmd_serve_runtime(const std::optional<std::string>& addr, const std::optional<std::string>& data,
                      const std::optional<std::string>& td_repo, std::optional<std::size_t> max_runs) {
  auto config = service::runtime_config_from_env();
  if (addr) config.address = parse_addr(*addr);
  if (data) config.data_dir = *data;
  if (td_repo) config.tdrepo_url = *td_repo;
  if (max_runs) config.max_runs = *max_runs;
  const auto address = config.address;
  service::RuntimeService s(std::move(config));
  return serve(s, address);
}

int cmd_serve_tdrepo(const std::optional<std::string>& addr, const std::optional<std::string>& data) {
  auto config = tdrepo::tdrepo_config_from_env();
  if (addr) config.address = parse_addr(*addr);
  if (data) config.data_dir = *data;
  tdrepo::TdRepoService s(config.data_dir);
  return serve(s, config.address);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-based BDI agents for the Web of Things"};
  app.require_subcommand(1);

  std::string input, output_file, file, config_file, td_file;
  std::optional<std::string> td_repo, addr, data;
  std::optional<std::size_t> max_runs;

  auto* compile = app.add_subcommand("compile", "Generate agent source from a blocks document");
  compile->add_option("input", input, "Blocks document (.blocks.json) or agent source (.asl)")->required();
  compile->add_option("-o,--output", output_file, "Write the source here instead of stdout");

  auto* check = app.add_subcommand("check", "Validate a blocks document or agent source file");
  check->add_option("file", file)->required();

  auto* run = app.add_subcommand("run", "Run a configuration locally until interrupted");
  run->add_option("config", config_file, "Configuration JSON; templates are resolved beside it")->required();
  run->add_option("--td-repo", td_repo, "TD repository base URL");
  bool verbose = false;
  run->add_flag("-v,--verbose", verbose, "Include debug lines in the log");

  auto* serve_cmd = app.add_subcommand("serve", "Start a service");
  serve_cmd->require_subcommand(1);
  auto* serve_runtime = serve_cmd->add_subcommand("runtime", "Runtime service");
  serve_runtime->add_option("--addr", addr, "host:port");
  serve_runtime->add_option("--data", data, "Data directory");
  serve_runtime->add_option("--td-repo", td_repo, "TD repository base URL");
  serve_runtime->add_option("--max-runs", max_runs, "Concurrent run limit")->check(CLI::PositiveNumber);
  auto* serve_tdrepo = serve_cmd->add_subcommand("tdrepo", "TD repository");
  serve_tdrepo->add_option("--addr", addr, "host:port");
  serve_tdrepo->add_option("--data", data, "Data directory");

  auto* td = app.add_subcommand("td", "Thing Description tools");
  td->require_subcommand(1);
  auto* td_validate = td->add_subcommand("validate", "Parse a TD and print diagnostics");
  td_validate->add_option("file", td_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }

  const std::string shown = !input.empty() ? input : !file.empty() ? file : config_file;
  try {
    if (*compile) return cmd_compile(input, output_file.empty() ? std::nullopt : std::optional<fs::path>(output_file));
    if (*check) return cmd_check(file);
    if (*run) return cmd_run(config_file, td_repo, verbose);
    if (*serve_runtime) return cmd_serve_runtime(addr, data, td_repo, max_runs);
    if (*serve_tdrepo) return cmd_serve_tdrepo(addr, data);
    if (*td_validate) return cmd_td_validate(td_file);
  } catch (const service::TemplateError& e) {
    print_diagnostics(shown, e.diagnostics());
    return kDiagnostics;
  } catch (const service::MissingTemplates& e) {
    std::cerr << shown << ": error: " << e.what() << "\n";
    return kDiagnostics;
  } catch (const service::ConfigError& e) {
    std::cerr << shown << ": error: " << e.what() << "\n";
    return kDiagnostics;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNetwork;
  }
  return kOk;
}
