#pragma once

#include <string>

namespace mvmam::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Level comes from MV_MAM_LOG (error|warn|info|debug); default is warn.
Level threshold();

void emit(Level level, const std::string& message);

inline void error(const std::string& m) { emit(Level::error, m); }
inline void warn(const std::string& m) { emit(Level::warn, m); }
inline void info(const std::string& m) { emit(Level::info, m); }
inline void debug(const std::string& m) { emit(Level::debug, m); }

}  // namespace mvmam::log
