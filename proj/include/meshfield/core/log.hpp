#pragma once

#include <functional>
#include <string>

namespace meshfield {

enum class LogLevel { Info, Warning };

using LogSink = std::function<void(LogLevel, const std::string&)>;

/// Replaces the process-wide sink and returns the previous one. The default
/// sink writes warnings to stderr and drops info messages.
LogSink set_log_sink(LogSink sink);

void log_info(const std::string& message);
void log_warning(const std::string& message);

/// Scoped sink that counts warnings (and optionally keeps them); restores the
/// previous sink on destruction.
class WarningCounter {
 public:
  WarningCounter();
  ~WarningCounter();
  WarningCounter(const WarningCounter&) = delete;
  WarningCounter& operator=(const WarningCounter&) = delete;

  int count() const;

 private:
  LogSink previous_;
  int count_ = 0;
};

}  // namespace meshfield
