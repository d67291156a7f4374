#include <spiralbrick/logging.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

namespace spiralbrick {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SPIRALBRICK_LOG");
        if (!env) return LogLevel::warn;
        const std::string v(env);
        if (v == "off" || v == "0") return LogLevel::off;
        if (v == "error") return LogLevel::error;
        if (v == "warn") return LogLevel::warn;
        if (v == "info") return LogLevel::info;
        if (v == "debug") return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level > log_level() || level == LogLevel::off) return;
    const char* tag = "";
    switch (level) {
        case LogLevel::error: tag = "error"; break;
        case LogLevel::warn: tag = "warn"; break;
        case LogLevel::info: tag = "info"; break;
        case LogLevel::debug: tag = "debug"; break;
        case LogLevel::off: return;
    }
    std::fprintf(stderr, "[spiralbrick] %s: %s\n", tag, msg.c_str());
}

}  // namespace spiralbrick
