#include "mvmam/log.hpp"

#include <cstdlib>
#include <iostream>

namespace mvmam::log {

Level threshold() {
  static const Level cached = [] {
    const char* env = std::getenv("MV_MAM_LOG");
    if (!env) return Level::warn;
    const std::string s(env);
    if (s == "error") return Level::error;
    if (s == "warn") return Level::warn;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
  }();
  return cached;
}

void emit(Level level, const std::string& message) {
  if (level > threshold()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[mv-mam " << names[static_cast<int>(level)] << "] " << message << "\n";
}

}  // namespace mvmam::log
