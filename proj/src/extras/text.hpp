#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "meshfield/core/error.hpp"

namespace meshfield::extras::text {

std::string read_file(const std::filesystem::path& path);

std::vector<std::string_view> split_lines(std::string_view data);
std::vector<std::string_view> tokens(std::string_view line);
std::string_view trim(std::string_view s);
std::string lower(std::string_view s);

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

/// Sequential line reader with line-numbered parse errors.
class LineReader {
 public:
  LineReader(std::string label, std::string_view data) : label_(std::move(label)), lines_(split_lines(data)) {}

  bool at_end() const { return pos_ >= lines_.size(); }
  std::size_t remaining() const { return lines_.size() - pos_; }
  std::string where() const { return label_ + ":" + std::to_string(pos_); }

  /// Next line, trimmed.
  std::string_view next(const char* expected);
  std::string_view peek() const { return at_end() ? std::string_view() : trim(lines_[pos_]); }
  std::int64_t next_int(const char* expected);
  double next_double(const char* expected);
  /// A count that must fit in the rest of the file (`per_line` lines each).
  std::size_t next_count(const char* expected, std::size_t lines_per_item);

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(where(), what); }

 private:
  std::string label_;
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

}  // namespace meshfield::extras::text
