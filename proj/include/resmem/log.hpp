#pragma once

#include <functional>
#include <string_view>

namespace resmem {

enum class LogLevel { Debug = 0, Info = 1, Warning = 2, Silent = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();

// Replaces the sink (stderr by default). Passing an empty function restores it.
void set_log_sink(std::function<void(LogLevel, std::string_view)> sink);

void log_message(LogLevel level, std::string_view message);
inline void log_warning(std::string_view message) { log_message(LogLevel::Warning, message); }
inline void log_info(std::string_view message) { log_message(LogLevel::Info, message); }

}  // namespace resmem
