#include "lgm/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace lgm {

namespace {

LogLevel parse_level(const char* text) {
    if (text == nullptr) return LogLevel::warn;
    const std::string s(text);
    if (s == "off") return LogLevel::off;
    if (s == "error") return LogLevel::error;
    if (s == "warn") return LogLevel::warn;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
        default: return "";
    }
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level(std::getenv("LGM_LOG"));
    return level;
}

void log(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    std::cerr << "[lgm " << level_tag(level) << "] " << message << '\n';
}

}  // namespace lgm
