#pragma once

#include <string>

namespace vbdf2 {

enum class LogLevel { none = 0, info = 1, debug = 2 };

/// Verbosity from the BDF2_LOG environment variable ("info" or "debug";
/// anything else, or unset, means silent). Read once per process.
LogLevel log_level();

void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace vbdf2
