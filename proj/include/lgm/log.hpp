#pragma once

#include <string>

namespace lgm {

// Log verbosity, controlled by the LGM_LOG environment variable:
// "off", "error", "warn" (default), "info", "debug".
enum class LogLevel { off = 0, error = 1, warn = 2, info = 3, debug = 4 };

LogLevel log_level();

void log(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log(LogLevel::error, m); }
inline void log_warn(const std::string& m) { log(LogLevel::warn, m); }
inline void log_info(const std::string& m) { log(LogLevel::info, m); }
inline void log_debug(const std::string& m) { log(LogLevel::debug, m); }

}  // namespace lgm
