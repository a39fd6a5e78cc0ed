#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace agentblocks::runtime {

enum class LogLevel { kDebug, kInfo, kWarn, kError };

std::string_view to_string(LogLevel level);

// UTC with millisecond precision, e.g. 2024-05-01T12:00:00.123Z.
std::string iso8601(std::chrono::system_clock::time_point t);

/// Append-only, thread-safe, line-oriented log of one run. Every line has
/// the shape `<ISO8601> <runId> <agent> <LEVEL> <message>` and a sequence
/// number; once the capacity is exceeded the oldest lines are discarded but
/// sequence numbers keep counting.
class RunLog {
 public:
  using Sink = std::function<void(const std::string& line)>;

  explicit RunLog(std::string run_id, std::size_t capacity = 100000);

  const std::string& run_id() const { return run_id_; }

  void append(std::string_view agent, LogLevel level, std::string_view message);

  struct Page {
    std::vector<std::string> lines;
    std::size_t next = 0;  // pass as `since` to continue
  };
  // Lines with sequence number >= since that are still retained.
  Page since(std::size_t since) const;
  std::size_t size() const;

  // Invoked synchronously, outside the log's lock, for every appended line.
  void set_sink(Sink sink);
  void set_min_level(LogLevel level);

 private:
  std::string run_id_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::deque<std::string> lines_;
  std::size_t first_seq_ = 0;
  LogLevel min_level_ = LogLevel::kDebug;
  Sink sink_;
};

}  // namespace agentblocks::runtime
