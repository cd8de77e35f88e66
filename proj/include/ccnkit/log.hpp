#pragma once

#include <string_view>

namespace ccn::log {

enum class Level { error = 0, info = 1, debug = 2 };

/// Threshold from the CCN_LOG environment variable (error, info, debug),
/// read once; defaults to error.
Level threshold();
void set_threshold(Level level);
bool enabled(Level level);

/// Writes one line to stderr when `level` is enabled. Thread-safe.
void write(Level level, std::string_view message);

inline void error(std::string_view m) { write(Level::error, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void debug(std::string_view m) { write(Level::debug, m); }

}  // namespace ccn::log
