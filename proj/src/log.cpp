#include "posewire/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace posewire::log {

namespace {

Level initial_level() {
  Level lvl = Level::kError;
  if (const char* env = std::getenv("POSEWIRE_LOG")) parse_level(env, lvl);
  return lvl;
}

std::atomic<Level>& threshold() {
  static std::atomic<Level> lvl{initial_level()};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() { return threshold().load(); }
void set_level(Level lvl) { threshold().store(lvl); }

bool parse_level(std::string_view text, Level& out) {
  if (text == "error") out = Level::kError;
  else if (text == "info") out = Level::kInfo;
  else if (text == "debug") out = Level::kDebug;
  else return false;
  return true;
}

void write(Level lvl, std::string_view message) {
  if (lvl > level()) return;
  static constexpr std::string_view kTags[] = {"error", "info", "debug"};
  std::lock_guard lock(sink_mutex());
  std::cerr << "[posewire " << kTags[static_cast<int>(lvl)] << "] " << message << '\n';
}

}  // namespace posewire::log
