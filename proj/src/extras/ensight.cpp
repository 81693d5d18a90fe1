#include <algorithm>
#include <map>
#include <optional>

#include "meshfield/core/log.hpp"
#include "meshfield/extras/extras.hpp"
#include "text.hpp"

namespace meshfield::extras {
namespace {

namespace fs = std::filesystem;

struct ElementKeyword {
  const char* name;
  ElementType type;
};

// Linear Gold element blocks; their node order matches ours.
constexpr ElementKeyword kElementKeywords[] = {
    {"point", ElementType::POINT},    {"bar2", ElementType::LINE2},      {"tria3", ElementType::TRIA3},
    {"quad4", ElementType::QUAD4},    {"tetra4", ElementType::TET4},     {"pyramid5", ElementType::PYRA5},
    {"penta6", ElementType::WEDGE6},  {"hexa8", ElementType::HEXA8},
};

std::optional<ElementType> element_keyword(std::string_view word) {
  for (const auto& k : kElementKeywords) {
    if (word == k.name) return k.type;
  }
  return std::nullopt;
}

struct TimeSet {
  std::int64_t num_steps = -1;
  std::vector<double> values;
  std::vector<std::int64_t> numbers;
  std::int64_t start = 0;
  std::int64_t increment = 1;

  std::vector<std::int64_t> file_numbers() const {
    if (!numbers.empty()) return numbers;
    std::vector<std::int64_t> out;
    for (std::int64_t k = 0; k < num_steps; ++k) out.push_back(start + k * increment);
    return out;
  }
};

struct Variable {
  std::string kind;  // e.g. "scalar per node"
  int time_set = 1;
  std::string description;
  std::string filename;
  int line = 0;
};

struct CaseFile {
  std::string geometry;
  std::vector<Variable> variables;
  std::map<int, TimeSet> time_sets;
};

struct Block {
  ElementType type;
  std::size_t first_element;  // 0-based global element index
  std::size_t count;
};

struct Part {
  std::int64_t number;
  std::string name;
  std::size_t first_node;  // 0-based global node index
  std::size_t num_nodes;
  std::vector<Block> blocks;
  std::size_t num_elements() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.count;
    return n;
  }
};

/// "key: rest" split; false when the line has no colon.
bool key_value(std::string_view line, std::string& key, std::string_view& rest) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  key = text::lower(text::trim(line.substr(0, colon)));
  rest = text::trim(line.substr(colon + 1));
  return true;
}

CaseFile parse_case(const std::string& label, const std::string& data) {
  CaseFile out;
  const auto lines = text::split_lines(data);
  std::string section;
  int current_set = 1;
  std::string list_key;  // TIME keys whose values may continue on following lines
  auto where = [&](std::size_t i) { return label + ":" + std::to_string(i + 1); };
  bool format_ok = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::string key;
    std::string_view rest;
    const bool has_colon = key_value(line, key, rest);
    if (!has_colon) {
      const std::string upper(line);
      if (upper == "FORMAT" || upper == "GEOMETRY" || upper == "VARIABLE" || upper == "TIME" || upper == "FILE" ||
          upper == "MATERIAL") {
        section = upper;
        list_key.clear();
        if (section == "FILE") throw ParseError(where(i), "single-file (FILE section) cases are not supported");
        continue;
      }
      if (section == "TIME" && !list_key.empty()) {
        rest = line;
        key = list_key;
      } else {
        throw ParseError(where(i), "unexpected line '" + std::string(line.substr(0, 40)) + "'");
      }
    } else {
      list_key.clear();
    }

    if (section == "FORMAT") {
      if (key == "type") {
        const auto t = text::lower(rest);
        if (t.find("gold") == std::string::npos) throw ParseError(where(i), "only EnSight Gold cases are supported");
        format_ok = true;
      }
    } else if (section == "GEOMETRY") {
      if (key == "model") {
        auto tok = text::tokens(rest);
        std::vector<std::string_view> words;
        for (auto t : tok) {
          if (text::lower(t).starts_with("change_coords")) {
            throw ParseError(where(i), "change_coords geometry is not supported (static geometry only)");
          }
          words.push_back(t);
        }
        std::int64_t dummy = 0;
        while (words.size() > 1 && text::parse_int(words.front(), dummy)) words.erase(words.begin());
        if (words.size() != 1) throw ParseError(where(i), "expected 'model: [ts] [fs] filename'");
        out.geometry = std::string(words.front());
        if (out.geometry.find('*') != std::string::npos) {
          throw ParseError(where(i), "transient geometry is not supported (static geometry only)");
        }
      }
    } else if (section == "VARIABLE") {
      Variable v;
      v.kind = key;
      v.line = static_cast<int>(i + 1);
      auto tok = text::tokens(rest);
      std::int64_t number = 0;
      if (tok.size() > 2 && text::parse_int(tok.front(), number)) {
        v.time_set = static_cast<int>(number);
        tok.erase(tok.begin());
      }
      if (tok.size() > 2 && text::parse_int(tok.front(), number)) tok.erase(tok.begin());  // file set
      if (key == "constant per case" || key == "constant per case file") {
        log_warning(where(i) + ": ignoring constant variable");
        continue;
      }
      if (tok.size() != 2) throw ParseError(where(i), "expected '" + key + ": [ts] [fs] description filename'");
      v.description = std::string(tok[0]);
      v.filename = std::string(tok[1]);
      out.variables.push_back(std::move(v));
    } else if (section == "TIME") {
      auto& set = out.time_sets[current_set];
      const auto tok = text::tokens(rest);
      auto numbers = [&](auto& target, auto parse) {
        for (auto t : tok) {
          typename std::decay_t<decltype(target)>::value_type value{};
          if (!parse(t, value)) throw ParseError(where(i), "bad number '" + std::string(t.substr(0, 40)) + "' in " + key);
          target.push_back(value);
        }
      };
      if (key == "time set") {
        std::int64_t n = 0;
        if (tok.empty() || !text::parse_int(tok[0], n)) throw ParseError(where(i), "bad time set number");
        current_set = static_cast<int>(n);
        out.time_sets[current_set];
      } else if (key == "number of steps") {
        if (tok.size() != 1 || !text::parse_int(tok[0], set.num_steps) || set.num_steps < 1 ||
            set.num_steps > 100000000) {
          throw ParseError(where(i), "bad number of steps");
        }
      } else if (key == "time values") {
        numbers(set.values, [](std::string_view s, double& v) { return text::parse_double(s, v); });
        list_key = key;
      } else if (key == "filename numbers") {
        numbers(set.numbers, [](std::string_view s, std::int64_t& v) { return text::parse_int(s, v); });
        list_key = key;
      } else if (key == "filename start number" || key == "filename increment") {
        std::int64_t n = 0;
        if (tok.size() != 1 || !text::parse_int(tok[0], n)) throw ParseError(where(i), "bad " + key);
        (key == "filename start number" ? set.start : set.increment) = n;
      }
    }
  }
  if (!format_ok) throw ParseError(label + ":1", "missing 'FORMAT / type: ensight gold'");
  if (out.geometry.empty()) throw ParseError(label + ":1", "missing GEOMETRY model file");
  return out;
}


bool is_binary_header(std::string_view first_line) {
  const auto l = text::lower(text::trim(first_line));
  return l.starts_with("c binary") || l.starts_with("fortran binary");
}

std::string read_ascii(const fs::path& path) {
  std::string data = text::read_file(path);
  const auto first = data.substr(0, std::min<std::size_t>(data.find('\n'), 80));
  if (is_binary_header(first) || data.find('\0') != std::string::npos) {
    throw MalformedFileError(path.string(), "binary EnSight Gold files are not supported (ASCII only)");
  }
  return data;
}

enum class IdMode { Off, Given, Assign, Ignore };

IdMode id_mode(text::LineReader& in, const char* what) {
  const auto tok = text::tokens(in.next(what));
  if (tok.size() != 3 || text::lower(tok[1]) != "id") in.fail(std::string("expected '") + what + " <off|given|assign|ignore>'");
  const auto mode = text::lower(tok[2]);
  if (mode == "off") return IdMode::Off;
  if (mode == "given") return IdMode::Given;
  if (mode == "assign") return IdMode::Assign;
  if (mode == "ignore") return IdMode::Ignore;
  in.fail("unknown id mode '" + std::string(tok[2].substr(0, 20)) + "'");
}

struct Geometry {
  Mesh mesh;
  std::vector<Part> parts;
};

Geometry parse_geometry(const std::string& label, const std::string& data) {
  text::LineReader in(label, data);
  in.next("description line 1");
  in.next("description line 2");
  const IdMode node_ids = id_mode(in, "node");
  const IdMode element_ids = id_mode(in, "element");
  const bool skip_node_ids = node_ids == IdMode::Given || node_ids == IdMode::Ignore;
  const bool skip_element_ids = element_ids == IdMode::Given || element_ids == IdMode::Ignore;
  if (text::lower(in.peek()) == "extents") {
    in.next("extents");
    for (int i = 0; i < 3; ++i) {
      const auto tok = text::tokens(in.next("extents range"));
      double v = 0;
      if (tok.size() != 2 || !text::parse_double(tok[0], v) || !text::parse_double(tok[1], v)) in.fail("bad extents line");
    }
  }

  std::vector<Eigen::Vector3d> coords;
  std::vector<ElementType> types;
  std::vector<std::vector<std::uint32_t>> cells;
  std::vector<Part> parts;
  std::map<std::string, int> name_uses;
  while (!in.at_end()) {
    if (in.peek().empty()) {
      in.next("part");
      continue;
    }
    if (text::lower(in.next("part")) != "part") in.fail("expected 'part'");
    Part part;
    part.number = in.next_int("part number");
    for (const auto& p : parts) {
      if (p.number == part.number) in.fail("duplicate part number " + std::to_string(part.number));
    }
    std::string name(in.next("part description"));
    for (auto& c : name) {
      if (c == '/' || static_cast<unsigned char>(c) < 0x20) c = '_';
    }
    if (name.empty()) name = "part_" + std::to_string(part.number);
    if (name_uses[name]++ > 0) name += "_" + std::to_string(part.number);
    part.name = name;

    const auto keyword = text::lower(in.next("coordinates"));
    if (keyword == "block") in.fail("structured (block) parts are not supported");
    if (keyword != "coordinates") in.fail("expected 'coordinates', got '" + keyword.substr(0, 40) + "'");
    part.num_nodes = in.next_count("number of nodes", skip_node_ids ? 4 : 3);
    part.first_node = coords.size();
    if (skip_node_ids) {
      for (std::size_t i = 0; i < part.num_nodes; ++i) in.next_int("node id");
    }
    coords.resize(coords.size() + part.num_nodes);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < part.num_nodes; ++i) coords[part.first_node + i](c) = in.next_double("coordinate");
    }

    while (!in.at_end() && text::lower(in.peek()) != "part") {
      if (in.peek().empty()) {
        in.next("element block");
        continue;
      }
      const auto word = text::lower(in.next("element block"));
      const auto type = element_keyword(word);
      if (!type) in.fail("unsupported element type '" + word.substr(0, 40) + "'");
      const int width = node_count(*type);
      Block block{*type, cells.size(), in.next_count("number of elements", skip_element_ids ? 2 : 1)};
      if (skip_element_ids) {
        for (std::size_t i = 0; i < block.count; ++i) in.next_int("element id");
      }
      for (std::size_t e = 0; e < block.count; ++e) {
        const auto tok = text::tokens(in.next("element connectivity"));
        if (static_cast<int>(tok.size()) != width) {
          in.fail(word + " needs " + std::to_string(width) + " node ids, got " + std::to_string(tok.size()));
        }
        std::vector<std::uint32_t> nodes;
        for (auto t : tok) {
          std::int64_t id = 0;
          if (!text::parse_int(t, id) || id < 1 || static_cast<std::size_t>(id) > part.num_nodes) {
            in.fail("node id '" + std::string(t.substr(0, 20)) + "' out of range for part " + std::to_string(part.number));
          }
          nodes.push_back(static_cast<std::uint32_t>(part.first_node + static_cast<std::size_t>(id)));
        }
        cells.push_back(std::move(nodes));
        types.push_back(*type);
      }
      part.blocks.push_back(block);
    }
    parts.push_back(std::move(part));
  }

  Coordinates xyz(static_cast<Index>(coords.size()), 3);
  for (std::size_t i = 0; i < coords.size(); ++i) xyz.row(static_cast<Index>(i)) = coords[i].transpose();
  std::size_t width = 1;
  for (const auto& c : cells) width = std::max(width, c.size());
  Connectivity conn = Connectivity::Zero(static_cast<Index>(cells.size()), static_cast<Index>(width));
  for (std::size_t e = 0; e < cells.size(); ++e)
    for (std::size_t a = 0; a < cells[e].size(); ++a) conn(static_cast<Index>(e), static_cast<Index>(a)) = cells[e][a];
  Mesh mesh(std::move(xyz), std::move(types), std::move(conn));
  for (const auto& part : parts) {
    Region region;
    region.name = part.name;
    for (std::size_t i = 0; i < part.num_nodes; ++i) region.node_ids.push_back(static_cast<std::uint32_t>(part.first_node + i + 1));
    for (const auto& b : part.blocks) {
      for (std::size_t e = 0; e < b.count; ++e) {
        region.element_ids.push_back(static_cast<std::uint32_t>(b.first_element + e + 1));
        region.dimension = std::max(region.dimension, dimension(b.type));
      }
    }
    mesh.add_region(std::move(region));
  }
  return {std::move(mesh), std::move(parts)};
}

/// Variable file name for one step: the run of '*' becomes the zero-padded
/// file number.
std::string expand_wildcard(const std::string& pattern, std::int64_t number, const std::string& where) {
  const auto first = pattern.find('*');
  if (first == std::string::npos) return pattern;
  const auto last = pattern.find_last_of('*');
  if (pattern.substr(first, last - first + 1).find_first_not_of('*') != std::string::npos) {
    throw ParseError(where, "file name '" + pattern + "' has more than one wildcard run");
  }
  const std::size_t width = last - first + 1;
  std::string digits = std::to_string(number);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return pattern.substr(0, first) + digits + pattern.substr(last + 1);
}

/// Values of one variable for one step: part number -> [M x D] values.
std::map<std::int64_t, Eigen::MatrixXd> parse_variable(const std::string& label, const std::string& data,
                                                       const Geometry& geometry, bool per_node, int dims) {
  text::LineReader in(label, data);
  in.next("description");
  std::map<std::int64_t, Eigen::MatrixXd> out;
  while (!in.at_end()) {
    if (in.peek().empty()) {
      in.next("part");
      continue;
    }
    if (text::lower(in.next("part")) != "part") in.fail("expected 'part'");
    const auto number = in.next_int("part number");
    const auto part = std::find_if(geometry.parts.begin(), geometry.parts.end(), [&](const Part& p) { return p.number == number; });
    if (part == geometry.parts.end()) in.fail("part " + std::to_string(number) + " is not in the geometry");
    if (out.count(number)) in.fail("part " + std::to_string(number) + " appears twice");
    Eigen::MatrixXd values(static_cast<Index>(per_node ? part->num_nodes : part->num_elements()), dims);
    if (per_node) {
      const auto keyword = text::lower(in.next("coordinates"));
      if (keyword != "coordinates") in.fail("expected 'coordinates', got '" + keyword.substr(0, 40) + "' (undefined and partial values are not supported)");
      for (int d = 0; d < dims; ++d)
        for (Index i = 0; i < values.rows(); ++i) values(i, d) = in.next_double("value");
    } else {
      Index offset = 0;
      for (const auto& block : part->blocks) {
        const auto keyword = text::lower(in.next("element block"));
        const auto type = element_keyword(keyword);
        if (!type || *type != block.type) {
          in.fail("expected element block '" + std::string(to_string(block.type)) + "', got '" + keyword.substr(0, 40) + "'");
        }
        const auto n = static_cast<Index>(block.count);
        for (int d = 0; d < dims; ++d)
          for (Index i = 0; i < n; ++i) values(offset + i, d) = in.next_double("value");
        offset += n;
      }
    }
    out.emplace(number, std::move(values));
  }
  return out;
}

}  // namespace

EnsightData read_ensight_case(const fs::path& case_path) {
  const std::string case_label = case_path.string();
  const CaseFile cas = parse_case(case_label, text::read_file(case_path));
  const fs::path dir = case_path.parent_path();
  const fs::path geo_path = dir / cas.geometry;
  Geometry geometry = parse_geometry(geo_path.string(), read_ascii(geo_path));

  ResultContainer results(AnalysisType::TRANSIENT);
  for (const auto& var : cas.variables) {
    const std::string where = case_label + ":" + std::to_string(var.line);
    int dims = 0;
    bool per_node = false;
    if (var.kind == "scalar per node") {
      dims = 1, per_node = true;
    } else if (var.kind == "vector per node") {
      dims = 3, per_node = true;
    } else if (var.kind == "scalar per element") {
      dims = 1;
    } else if (var.kind == "vector per element") {
      dims = 3;
    } else {
      throw ParseError(where, "unsupported variable type '" + var.kind + "'");
    }

    std::vector<double> steps{0.0};
    std::vector<std::int64_t> numbers{0};
    if (!cas.time_sets.empty()) {
      const auto ts = cas.time_sets.find(var.time_set);
      if (ts == cas.time_sets.end()) throw ParseError(where, "unknown time set " + std::to_string(var.time_set));
      const TimeSet& set = ts->second;
      if (set.num_steps < 1) throw ParseError(where, "time set " + std::to_string(var.time_set) + " has no 'number of steps'");
      if (static_cast<std::int64_t>(set.values.size()) != set.num_steps) {
        throw ParseError(where, "time set " + std::to_string(var.time_set) + " lists " + std::to_string(set.values.size()) +
                                    " time values for " + std::to_string(set.num_steps) + " steps");
      }
      steps = set.values;
      numbers = set.file_numbers();
      if (static_cast<std::int64_t>(numbers.size()) != set.num_steps) {
        throw ParseError(where, "time set " + std::to_string(var.time_set) + " lists " + std::to_string(numbers.size()) +
                                    " file numbers for " + std::to_string(set.num_steps) + " steps");
      }
    }
    const bool wildcard = var.filename.find('*') != std::string::npos;
    if (!wildcard && steps.size() > 1) {
      throw ParseError(where, "variable file '" + var.filename + "' has no wildcard but the time set has " +
                                  std::to_string(steps.size()) + " steps");
    }

    const auto n = static_cast<Index>(steps.size());
    std::map<std::int64_t, ResultArray::Data> data;
    for (Index k = 0; k < n; ++k) {
      const fs::path file = dir / expand_wildcard(var.filename, numbers[static_cast<std::size_t>(k)], where);
      const auto values = parse_variable(file.string(), read_ascii(file), geometry, per_node, dims);
      for (const auto& [part, v] : values) {
        auto& d = data[part];
        if (d.size() == 0) d = ResultArray::Data::Zero(n, v.size());
        if (d.cols() != v.size()) throw ParseError(file.string(), "part " + std::to_string(part) + " changes size between steps");
        d.row(k) = Eigen::Map<const Eigen::RowVectorXd>(ResultArray::Data(v).data(), v.size());
      }
      if (k > 0 && values.size() != data.size()) throw ParseError(file.string(), "variable covers different parts in different steps");
    }

    const Eigen::VectorXd step_values = Eigen::Map<const Eigen::VectorXd>(steps.data(), n);
    for (const auto& part : geometry.parts) {
      const auto it = data.find(part.number);
      if (it == data.end()) continue;
      ResultMeta meta;
      meta.quantity = var.description;
      meta.region = part.name;
      meta.res_type = per_node ? ResType::NODE : ResType::ELEMENT;
      meta.analysis_type = AnalysisType::TRANSIENT;
      const Index m = it->second.cols() / dims;
      results.add(ResultArray(std::move(meta), {n, m, dims}, step_values, it->second));
    }
  }
  return {std::move(geometry.mesh), std::move(results)};
}

}  // namespace meshfield::extras
