#include "meshfield/core/log.hpp"

#include <iostream>
#include <mutex>

namespace meshfield {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void default_sink(LogLevel level, const std::string& message) {
  if (level == LogLevel::Warning) std::cerr << "warning: " << message << '\n';
}

LogSink& current_sink() {
  static LogSink sink = default_sink;
  return sink;
}

void emit(LogLevel level, const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(level, message);
}

}  // namespace

LogSink set_log_sink(LogSink sink) {
  std::lock_guard lock(sink_mutex());
  LogSink previous = std::move(current_sink());
  current_sink() = sink ? std::move(sink) : LogSink(default_sink);
  return previous;
}

void log_info(const std::string& message) { emit(LogLevel::Info, message); }
void log_warning(const std::string& message) { emit(LogLevel::Warning, message); }

// The sink runs under sink_mutex, so count_ needs no further locking.
WarningCounter::WarningCounter() {
  previous_ = set_log_sink([this](LogLevel level, const std::string&) {
    if (level == LogLevel::Warning) ++count_;
  });
}

WarningCounter::~WarningCounter() { set_log_sink(std::move(previous_)); }

int WarningCounter::count() const {
  std::lock_guard lock(sink_mutex());
  return count_;
}

}  // namespace meshfield
