#include "agentblocks/tdrepo/store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "agentblocks/wot/uri.hpp"

namespace agentblocks::tdrepo {

namespace fs = std::filesystem;

bool is_workspace_name(std::string_view name) {
  if (name.empty() || name.size() > 128 || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

void atomic_write(const fs::path& file, std::string_view contents) {
  static std::atomic<unsigned long> counter{0};
  fs::create_directories(file.parent_path());
  const fs::path tmp = file.parent_path() / ("." + file.filename().string() + ".tmp" + std::to_string(::getpid()) +
                                             "." + std::to_string(++counter));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, file);
}

std::optional<std::string> read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TdStore::TdStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "td"); }

fs::path TdStore::dir(std::string_view ws) const { return root_ / "td" / std::string(ws); }

fs::path TdStore::file(std::string_view ws, std::string_view id) const {
  return dir(ws) / (wot::percent_encode(id) + ".json");
}

std::vector<std::string> TdStore::workspaces() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(root_ / "td"))
    if (e.is_directory() && is_workspace_name(e.path().filename().string())) out.push_back(e.path().filename());
  std::sort(out.begin(), out.end());
  return out;
}

bool TdStore::has_workspace(std::string_view ws) const {
  std::lock_guard lock(mu_);
  return is_workspace_name(ws) && fs::is_directory(dir(ws));
}

bool TdStore::create_workspace(std::string_view ws) {
  if (!is_workspace_name(ws)) throw std::invalid_argument("invalid workspace name");
  std::lock_guard lock(mu_);
  return fs::create_directories(dir(ws));
}

bool TdStore::delete_workspace(std::string_view ws) {
  std::lock_guard lock(mu_);
  if (!is_workspace_name(ws) || !fs::is_directory(dir(ws))) return false;
  fs::remove_all(dir(ws));
  return true;
}

std::optional<std::vector<std::string>> TdStore::things(std::string_view ws) const {
  std::lock_guard lock(mu_);
  if (!is_workspace_name(ws) || !fs::is_directory(dir(ws))) return std::nullopt;
  std::map<std::string, fs::path> by_id;
  for (const auto& e : fs::directory_iterator(dir(ws))) {
    const std::string name = e.path().filename().string();
    if (!e.is_regular_file() || name.front() == '.' || e.path().extension() != ".json") continue;
    if (auto id = wot::percent_decode(e.path().stem().string())) by_id.emplace(*id, e.path());
  }
  std::vector<std::string> out;
  for (const auto& [id, path] : by_id)
    if (auto body = read_file(path)) out.push_back(std::move(*body));
  return out;
}

std::optional<std::string> TdStore::thing(std::string_view ws, std::string_view id) const {
  std::lock_guard lock(mu_);
  if (!is_workspace_name(ws) || !fs::is_directory(dir(ws))) return std::nullopt;
  return read_file(file(ws, id));
}

TdStore::PutResult TdStore::add_thing(std::string_view ws, std::string_view id, std::string_view body) {
  std::lock_guard lock(mu_);
  if (!is_workspace_name(ws) || !fs::is_directory(dir(ws))) return PutResult::kNoWorkspace;
  const fs::path f = file(ws, id);
  if (fs::exists(f)) return PutResult::kDuplicate;
  atomic_write(f, body);
  return PutResult::kCreated;
}

bool TdStore::delete_thing(std::string_view ws, std::string_view id) {
  std::lock_guard lock(mu_);
  if (!is_workspace_name(ws) || !fs::is_directory(dir(ws))) return false;
  return fs::remove(file(ws, id));
}

}  // namespace agentblocks::tdrepo
