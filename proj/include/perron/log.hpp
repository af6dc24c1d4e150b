#pragma once

#include <sstream>
#include <string>

namespace perron::log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Current threshold, read once from PERRON_LOG (error|warn|info|debug; default warn).
Level threshold();
void set_threshold(Level level);
void write(Level level, const std::string& message);

template <class... Args>
void emit(Level level, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::ostringstream os;
  (os << ... << args);
  write(level, os.str());
}

template <class... Args> void warn(const Args&... args) { emit(Level::kWarn, args...); }
template <class... Args> void info(const Args&... args) { emit(Level::kInfo, args...); }
template <class... Args> void debug(const Args&... args) { emit(Level::kDebug, args...); }

}  // namespace perron::log
