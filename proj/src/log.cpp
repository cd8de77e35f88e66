#include "ccnkit/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace ccn::log {

namespace {

Level from_env() {
  const char* v = std::getenv("CCN_LOG");
  if (!v) return Level::error;
  const std::string s(v);
  if (s == "debug") return Level::debug;
  if (s == "info") return Level::info;
  return Level::error;
}

std::atomic<int>& current() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::string_view tag(Level l) {
  switch (l) {
    case Level::error: return "error";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "";
}

}  // namespace

Level threshold() { return static_cast<Level>(current().load()); }
void set_threshold(Level level) { current().store(static_cast<int>(level)); }
bool enabled(Level level) { return static_cast<int>(level) <= current().load(); }

void write(Level level, std::string_view message) {
  if (!enabled(level)) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[ccn " << tag(level) << "] " << message << '\n';
}

}  // namespace ccn::log
