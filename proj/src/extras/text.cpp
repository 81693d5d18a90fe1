#include "text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace meshfield::extras::text {

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError(path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::vector<std::string_view> split_lines(std::string_view data) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view LineReader::next(const char* expected) {
  if (at_end()) throw ParseError(label_ + ":" + std::to_string(pos_ + 1), std::string("unexpected end of file, expected ") + expected);
  return trim(lines_[pos_++]);
}

std::int64_t LineReader::next_int(const char* expected) {
  const auto line = next(expected);
  std::int64_t value = 0;
  if (!parse_int(line, value)) fail(std::string("expected ") + expected + ", got '" + std::string(line.substr(0, 40)) + "'");
  return value;
}

double LineReader::next_double(const char* expected) {
  const auto line = next(expected);
  double value = 0;
  if (!parse_double(line, value)) fail(std::string("expected ") + expected + ", got '" + std::string(line.substr(0, 40)) + "'");
  return value;
}

std::size_t LineReader::next_count(const char* expected, std::size_t lines_per_item) {
  const std::int64_t n = next_int(expected);
  if (n < 0) fail(std::string(expected) + " must be non-negative");
  if (lines_per_item > 0 && static_cast<std::uint64_t>(n) > remaining() / lines_per_item) {
    fail(std::string(expected) + " " + std::to_string(n) + " exceeds the rest of the file");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace meshfield::extras::text
