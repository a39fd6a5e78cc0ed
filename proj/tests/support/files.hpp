#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <unistd.h>

namespace agentblocks::testing {

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef AGENTBLOCKS_FIXTURES
inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(AGENTBLOCKS_FIXTURES) / name;
}
inline std::string fixture(const std::string& name) { return read_text(fixture_path(name)); }
#endif

// An empty per-process scratch directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("agentblocks_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace agentblocks::testing
