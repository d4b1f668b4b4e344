#include "vbdf2/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace vbdf2 {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BDF2_LOG");
    if (env == nullptr) return LogLevel::none;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::none;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::info) {
    std::fprintf(stderr, "[info] %s\n", message.c_str());
  }
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::debug) {
    std::fprintf(stderr, "[debug] %s\n", message.c_str());
  }
}

}  // namespace vbdf2
