#include "agentblocks/runtime/run_log.hpp"

#include <cstdio>
#include <ctime>

namespace agentblocks::runtime {

std::string_view to_string(LogLevel level) {
  switch (level) {
    case LogLevel::kDebug: return "DEBUG";
    case LogLevel::kInfo: return "INFO";
    case LogLevel::kWarn: return "WARN";
    case LogLevel::kError: return "ERROR";
  }
  return "INFO";
}

std::string iso8601(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  return buf;
}

RunLog::RunLog(std::string run_id, std::size_t capacity) : run_id_(std::move(run_id)), capacity_(capacity) {}

void RunLog::append(std::string_view agent, LogLevel level, std::string_view message) {
  std::string line = iso8601(std::chrono::system_clock::now());
  line += ' ';
  line += run_id_;
  line += ' ';
  line += agent.empty() ? std::string_view("-") : agent;
  line += ' ';
  line += to_string(level);
  line += ' ';
  // One record per line: embedded newlines would break line-oriented readers.
  for (char c : message) line += (c == '\n' || c == '\r') ? ' ' : c;

  Sink sink;
  {
    std::lock_guard lock(mu_);
    if (level < min_level_) return;
    lines_.push_back(line);
    while (lines_.size() > capacity_) {
      lines_.pop_front();
      ++first_seq_;
    }
    sink = sink_;
  }
  if (sink) sink(line);
}

RunLog::Page RunLog::since(std::size_t since) const {
  std::lock_guard lock(mu_);
  Page page;
  page.next = first_seq_ + lines_.size();
  for (std::size_t seq = std::max(since, first_seq_); seq < page.next; ++seq)
    page.lines.push_back(lines_[seq - first_seq_]);
  return page;
}

std::size_t RunLog::size() const {
  std::lock_guard lock(mu_);
  return first_seq_ + lines_.size();
}

void RunLog::set_sink(Sink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

void RunLog::set_min_level(LogLevel level) {
  std::lock_guard lock(mu_);
  min_level_ = level;
}

}  // namespace agentblocks::runtime
