#include "ascnet/common/log.hpp"

#include <atomic>
#include <iostream>

namespace ascnet::log {

namespace {
std::atomic<Level> g_level{Level::warn};
const char* label(Level l) {
  switch (l) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
    default: return "";
  }
}
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void write(Level l, std::string_view message) {
  if (l < g_level.load()) return;
  std::cerr << "[ascnet " << label(l) << "] " << message << '\n';
}

}  // namespace ascnet::log
