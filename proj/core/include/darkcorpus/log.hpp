#pragma once

#include <string_view>

namespace darkcorpus {

// Log levels, ordered. The active level comes from the DARKCORPUS_LOG
// environment variable (error|warn|info|debug); default is warn.
enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

LogLevel log_level();
void set_log_level(LogLevel level);

// Writes "darkcorpus <level>: <message>" to stderr when level is enabled.
void log_message(LogLevel level, std::string_view message);

inline void log_error(std::string_view m) { log_message(LogLevel::kError, m); }
inline void log_warn(std::string_view m) { log_message(LogLevel::kWarn, m); }
inline void log_info(std::string_view m) { log_message(LogLevel::kInfo, m); }
inline void log_debug(std::string_view m) { log_message(LogLevel::kDebug, m); }

}  // namespace darkcorpus
