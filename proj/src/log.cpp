#include "resmem/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace resmem {
namespace {

std::atomic<LogLevel> g_level{LogLevel::Warning};
std::mutex g_sink_mutex;
std::function<void(LogLevel, std::string_view)> g_sink;

const char *level_name(LogLevel level) {
    switch (level) {
        case LogLevel::Debug:
            return "debug";
        case LogLevel::Info:
            return "info";
        case LogLevel::Warning:
            return "warning";
        default:
            return "";
    }
}

}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void set_log_sink(std::function<void(LogLevel, std::string_view)> sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void log_message(LogLevel level, std::string_view message) {
    if (level < g_level.load() || level == LogLevel::Silent) {
        return;
    }
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(level, message);
    } else {
        std::clog << "resmem " << level_name(level) << ": " << message << '\n';
    }
}

}  // namespace resmem
