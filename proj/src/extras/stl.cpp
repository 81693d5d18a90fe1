#include <array>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "meshfield/core/log.hpp"
#include "meshfield/extras/extras.hpp"
#include "text.hpp"

namespace meshfield::extras {
namespace {

constexpr std::size_t kHeaderBytes = 80;
constexpr std::size_t kRecordBytes = 50;

struct Facets {
  std::string name;
  std::vector<Eigen::Vector3d> vertices;  // 3 per facet
};

std::string region_name(std::string_view raw) {
  std::string name(text::trim(raw));
  for (auto& c : name) {
    if (c == '/' || static_cast<unsigned char>(c) < 0x20) c = '_';
  }
  return name.empty() ? "stl" : name;
}

Facets parse_binary(const std::string& path, const std::string& data) {
  Facets out;
  std::string_view header(data.data(), kHeaderBytes);
  if (header.substr(0, 5) == "solid") {
    header.remove_prefix(5);
    header = header.substr(0, header.find_first_of(std::string_view("\0\n\r", 3)));
    out.name = std::string(header);
  }
  std::uint32_t count = 0;
  std::memcpy(&count, data.data() + kHeaderBytes, sizeof count);
  out.vertices.reserve(std::size_t{count} * 3);
  for (std::size_t t = 0; t < count; ++t) {
    const char* record = data.data() + kHeaderBytes + 4 + t * kRecordBytes;
    for (int v = 0; v < 3; ++v) {
      float xyz[3];
      std::memcpy(xyz, record + 12 + 12 * v, sizeof xyz);
      const Eigen::Vector3d p(xyz[0], xyz[1], xyz[2]);
      if (!p.allFinite()) {
        throw ParseError(path + ":byte " + std::to_string(kHeaderBytes + 4 + t * kRecordBytes),
                         "non-finite vertex coordinate in facet " + std::to_string(t));
      }
      out.vertices.push_back(p);
    }
  }
  return out;
}

Facets parse_ascii(const std::string& path, const std::string& data) {
  Facets out;
  text::LineReader lines(path, data);
  auto expect = [&](std::string_view keyword, std::size_t min_tokens) {
    const auto tok = text::tokens(lines.next(keyword.data()));
    if (tok.size() < min_tokens || text::lower(tok[0]) != keyword) {
      lines.fail("malformed facet: expected '" + std::string(keyword) + "'");
    }
    return tok;
  };
  bool seen_solid = false;
  bool in_solid = false;
  while (!lines.at_end()) {
    const auto line = lines.next("solid");
    const auto tok = text::tokens(line);
    if (tok.empty()) continue;
    const auto key = text::lower(tok[0]);
    if (!in_solid) {
      if (key != "solid") lines.fail("expected 'solid', got '" + std::string(tok[0].substr(0, 40)) + "'");
      if (!seen_solid) out.name = std::string(line.substr(5));
      seen_solid = in_solid = true;
      continue;
    }
    if (key == "endsolid") {
      in_solid = false;
      continue;
    }
    if (key != "facet") lines.fail("malformed facet: expected 'facet' or 'endsolid', got '" + std::string(tok[0].substr(0, 40)) + "'");
    const auto loop = expect("outer", 2);
    if (text::lower(loop[1]) != "loop") lines.fail("malformed facet: expected 'outer loop'");
    for (int v = 0; v < 3; ++v) {
      const auto vertex = expect("vertex", 4);
      Eigen::Vector3d p;
      for (int c = 0; c < 3; ++c) {
        if (vertex.size() != 4 || !text::parse_double(vertex[static_cast<std::size_t>(c + 1)], p(c))) {
          lines.fail("malformed facet: vertex needs three finite coordinates");
        }
      }
      out.vertices.push_back(p);
    }
    expect("endloop", 1);
    expect("endfacet", 1);
  }
  if (!seen_solid) throw ParseError(path + ":1", "empty ASCII STL file");
  if (in_solid) throw ParseError(lines.where(), "missing 'endsolid'");
  return out;
}

struct CellHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

Mesh merge(const Facets& facets) {
  const auto nv = static_cast<Index>(facets.vertices.size());
  Eigen::MatrixX3d all(nv, 3);
  for (Index i = 0; i < nv; ++i) all.row(i) = facets.vertices[static_cast<std::size_t>(i)].transpose();
  const double tol = nv > 0 ? 1e-9 * (all.colwise().maxCoeff() - all.colwise().minCoeff()).norm() : 0.0;
  const Eigen::RowVector3d origin = nv > 0 ? Eigen::RowVector3d(all.colwise().minCoeff()) : Eigen::RowVector3d::Zero();

  std::vector<Eigen::Vector3d> nodes;
  std::vector<std::uint32_t> vertex_node(static_cast<std::size_t>(nv));
  std::unordered_map<std::array<std::int64_t, 3>, std::vector<std::uint32_t>, CellHash> cells;
  auto cell_of = [&](const Eigen::RowVector3d& p) {
    std::array<std::int64_t, 3> key{};
    for (int c = 0; c < 3; ++c) key[static_cast<std::size_t>(c)] = tol > 0 ? static_cast<std::int64_t>(std::floor((p(c) - origin(c)) / tol)) : 0;
    return key;
  };
  for (Index i = 0; i < nv; ++i) {
    const Eigen::RowVector3d p = all.row(i);
    const auto key = cell_of(p);
    std::int64_t found = -1;
    for (std::int64_t dx = -1; dx <= 1 && found < 0; ++dx)
      for (std::int64_t dy = -1; dy <= 1 && found < 0; ++dy)
        for (std::int64_t dz = -1; dz <= 1 && found < 0; ++dz) {
          const auto it = cells.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it == cells.end()) continue;
          for (auto id : it->second) {
            if ((nodes[id - 1].transpose() - p).cwiseAbs().maxCoeff() <= tol) {
              found = id;
              break;
            }
          }
        }
    if (found < 0) {
      nodes.push_back(p.transpose());
      found = static_cast<std::int64_t>(nodes.size());
      cells[key].push_back(static_cast<std::uint32_t>(found));
    }
    vertex_node[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(found);
  }

  Coordinates coords(static_cast<Index>(nodes.size()), 3);
  for (std::size_t i = 0; i < nodes.size(); ++i) coords.row(static_cast<Index>(i)) = nodes[i].transpose();
  const Index ne = nv / 3;
  Connectivity conn(ne, 3);
  for (Index e = 0; e < ne; ++e)
    for (Index a = 0; a < 3; ++a) conn(e, a) = vertex_node[static_cast<std::size_t>(3 * e + a)];
  Mesh mesh(std::move(coords), std::vector<ElementType>(static_cast<std::size_t>(ne), ElementType::TRIA3), std::move(conn));
  mesh.add_region(whole_mesh_region(mesh, region_name(facets.name)));
  return mesh;
}

}  // namespace

Mesh read_stl(const std::filesystem::path& path) {
  const std::string data = text::read_file(path);
  const std::string label = path.string();
  Facets facets;
  std::uint32_t count = 0;
  if (data.size() >= kHeaderBytes + 4) std::memcpy(&count, data.data() + kHeaderBytes, sizeof count);
  const bool binary = data.size() >= kHeaderBytes + 4 &&
                      data.size() == kHeaderBytes + 4 + std::size_t{count} * kRecordBytes;
  const auto start = data.find_first_not_of(" \t\r\n");
  // Binary headers often start with "solid" too; text never holds NUL bytes.
  const bool ascii = !binary && start != std::string::npos &&
                     text::lower(std::string_view(data).substr(start, 5)) == "solid" &&
                     data.find('\0') == std::string::npos;
  if (binary) {
    facets = parse_binary(label, data);
  } else if (ascii) {
    facets = parse_ascii(label, data);
  } else if (data.size() < kHeaderBytes + 4) {
    throw ParseError(label + ":byte 0", "file too short for a binary STL header (" + std::to_string(data.size()) + " bytes)");
  } else {
    throw ParseError(label + ":byte " + std::to_string(kHeaderBytes),
                     "truncated binary STL: header announces " + std::to_string(count) + " triangles (" +
                         std::to_string(kHeaderBytes + 4 + std::size_t{count} * kRecordBytes) + " bytes), file has " +
                         std::to_string(data.size()) + " bytes");
  }
  if (facets.vertices.empty()) log_warning("STL file " + label + " contains no facets");
  return merge(facets);
}

}  // namespace meshfield::extras
