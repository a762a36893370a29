#include "darkcorpus/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace darkcorpus {

namespace {

LogLevel parse_env_level() {
    const char* env = std::getenv("DARKCORPUS_LOG");
    if (!env) return LogLevel::kWarn;
    std::string v(env);
    if (v == "error") return LogLevel::kError;
    if (v == "warn") return LogLevel::kWarn;
    if (v == "info") return LogLevel::kInfo;
    if (v == "debug") return LogLevel::kDebug;
    return LogLevel::kWarn;
}

LogLevel& current_level() {
    static LogLevel level = parse_env_level();
    return level;
}

constexpr const char* kLevelNames[] = {"error", "warn", "info", "debug"};

}  // namespace

LogLevel log_level() { return current_level(); }
void set_log_level(LogLevel level) { current_level() = level; }

void log_message(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > static_cast<int>(current_level())) return;
    std::cerr << "darkcorpus " << kLevelNames[static_cast<int>(level)] << ": " << message << '\n';
}

}  // namespace darkcorpus
