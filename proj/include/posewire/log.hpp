#pragma once

#include <string_view>

namespace posewire::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

/// Current threshold. Initialized from POSEWIRE_LOG (error|info|debug),
/// defaulting to error.
Level level();
void set_level(Level level);
/// Parses error|info|debug; returns false for anything else.
bool parse_level(std::string_view text, Level& out);

void write(Level level, std::string_view message);

inline void error(std::string_view m) { write(Level::kError, m); }
inline void info(std::string_view m) { write(Level::kInfo, m); }
inline void debug(std::string_view m) { write(Level::kDebug, m); }

}  // namespace posewire::log
