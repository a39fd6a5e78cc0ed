#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agentblocks::tdrepo {

// Letters, digits, '-', '_' and '.', not starting with '.'.
bool is_workspace_name(std::string_view name);

// Writes via a temporary file in the same directory and a rename.
void atomic_write(const std::filesystem::path& file, std::string_view contents);
std::optional<std::string> read_file(const std::filesystem::path& file);

/// TD documents on disk: `<root>/td/<workspace>/<percent-encoded id>.json`.
/// Stored bodies are kept byte for byte. All operations are serialized.
class TdStore {
 public:
  enum class PutResult { kCreated, kDuplicate, kNoWorkspace };

  explicit TdStore(std::filesystem::path root);

  std::vector<std::string> workspaces() const;  // sorted
  bool has_workspace(std::string_view ws) const;
  // Returns true when the workspace was created, false when it existed.
  bool create_workspace(std::string_view ws);
  bool delete_workspace(std::string_view ws);

  // Bodies ordered by thing id; nullopt for an unknown workspace.
  std::optional<std::vector<std::string>> things(std::string_view ws) const;
  std::optional<std::string> thing(std::string_view ws, std::string_view id) const;
  PutResult add_thing(std::string_view ws, std::string_view id, std::string_view body);
  bool delete_thing(std::string_view ws, std::string_view id);

 private:
  std::filesystem::path dir(std::string_view ws) const;
  std::filesystem::path file(std::string_view ws, std::string_view id) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace agentblocks::tdrepo
