#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/transforms/transforms.hpp"

namespace meshfield::transforms {
namespace {

struct Cell {
  ElementType type;
  std::vector<std::uint32_t> nodes;  // 1-based
};

Eigen::Vector3d point(const std::vector<Eigen::Vector3d>& coords, std::uint32_t id) { return coords[id - 1]; }

/// Signed volume-like measure, positive for the conventional node order.
double signed_measure(const Cell& cell, const std::vector<Eigen::Vector3d>& coords) {
  auto p = [&](int i) { return point(coords, cell.nodes[static_cast<std::size_t>(i)]); };
  switch (cell.type) {
    case ElementType::TET4: return (p(1) - p(0)).cross(p(2) - p(0)).dot(p(3) - p(0));
    case ElementType::PYRA5: {
      const Eigen::Vector3d base = 0.25 * (p(0) + p(1) + p(2) + p(3));
      return (p(2) - p(0)).cross(p(3) - p(1)).dot(p(4) - base);
    }
    case ElementType::WEDGE6: {
      const Eigen::Vector3d n = (p(1) - p(0)).cross(p(2) - p(0)) + (p(4) - p(3)).cross(p(5) - p(3));
      return n.dot((p(3) + p(4) + p(5) - p(0) - p(1) - p(2)) / 3.0);
    }
    case ElementType::HEXA8: {
      Eigen::Matrix3d j;
      j.col(0) = p(1) + p(2) + p(5) + p(6) - p(0) - p(3) - p(4) - p(7);
      j.col(1) = p(2) + p(3) + p(6) + p(7) - p(0) - p(1) - p(4) - p(5);
      j.col(2) = p(4) + p(5) + p(6) + p(7) - p(0) - p(1) - p(2) - p(3);
      return j.determinant() / 64.0;
    }
    default: return 1.0;
  }
}

void orient(Cell& cell, const std::vector<Eigen::Vector3d>& coords, double length_scale) {
  const double m = signed_measure(cell, coords);
  if (std::abs(m) <= 1e-12 * length_scale * length_scale * length_scale) {
    throw ValidationError("sweep produces a degenerate " + std::string(to_string(cell.type)) +
                          " (the sweep direction lies in the element plane)");
  }
  if (m > 0) return;
  auto& n = cell.nodes;
  switch (cell.type) {
    case ElementType::TET4: std::swap(n[1], n[2]); break;
    case ElementType::PYRA5: std::swap(n[1], n[3]); break;
    case ElementType::WEDGE6:
      std::swap(n[1], n[2]);
      std::swap(n[4], n[5]);
      break;
    case ElementType::HEXA8:
      std::swap(n[1], n[3]);
      std::swap(n[5], n[7]);
      break;
    default: break;
  }
}

Mesh assemble(const std::vector<Eigen::Vector3d>& coords, const std::vector<Cell>& cells, const std::string& region) {
  Coordinates xyz(static_cast<Index>(coords.size()), 3);
  for (std::size_t i = 0; i < coords.size(); ++i) xyz.row(static_cast<Index>(i)) = coords[i].transpose();
  std::size_t width = 0;
  for (const auto& c : cells) width = std::max(width, c.nodes.size());
  Connectivity conn = Connectivity::Zero(static_cast<Index>(cells.size()), static_cast<Index>(width));
  std::vector<ElementType> types;
  types.reserve(cells.size());
  for (std::size_t e = 0; e < cells.size(); ++e) {
    types.push_back(cells[e].type);
    for (std::size_t a = 0; a < cells[e].nodes.size(); ++a) conn(static_cast<Index>(e), static_cast<Index>(a)) = cells[e].nodes[a];
  }
  Mesh out(std::move(xyz), std::move(types), std::move(conn));
  out.add_region(whole_mesh_region(out, region));
  return out;
}

/// The region as a compact standalone mesh, checked to be sweepable.
ExtractedRegion sweepable_base(const Mesh& mesh, std::string_view region) {
  ExtractedRegion base = extract_region(mesh, region);
  if (base.mesh.num_elements() == 0) throw ValidationError("region " + std::string(region) + " has no elements to sweep");
  int dim = -1;
  for (auto type : base.mesh.element_types()) {
    if (type != ElementType::LINE2 && type != ElementType::TRIA3 && type != ElementType::QUAD4) {
      throw ValidationError("cannot sweep " + std::string(to_string(type)) + " elements, supported: LINE2, TRIA3, QUAD4");
    }
    if (dim >= 0 && dimension(type) != dim) throw ValidationError("sweep region mixes 1-D and 2-D elements");
    dim = dimension(type);
  }
  return base;
}

std::vector<Eigen::Vector3d> rows_of(const Coordinates& c) {
  std::vector<Eigen::Vector3d> out(static_cast<std::size_t>(c.rows()));
  for (Index i = 0; i < c.rows(); ++i) out[static_cast<std::size_t>(i)] = c.row(i).transpose();
  return out;
}

}  // namespace

Mesh extrude_mesh_region(const Mesh& mesh, std::string_view region, const std::vector<Eigen::Vector3d>& path) {
  if (path.empty()) throw ValidationError("extrusion path needs at least one segment");
  const ExtractedRegion base = sweepable_base(mesh, region);
  const double scale = bounding_box_diagonal(base.mesh.coordinates());
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (const auto& step : path) {
    if (!(step.norm() > 1e-12 * std::max(scale, 1.0))) throw ValidationError("extrusion path has a zero-length segment");
    total += step;
  }
  if (!(total.norm() > 1e-12 * std::max(scale, 1.0))) throw ValidationError("extrusion path has zero total offset");

  const auto nb = static_cast<std::uint32_t>(base.mesh.num_nodes());
  const auto layers = path.size() + 1;
  std::vector<Eigen::Vector3d> coords = rows_of(base.mesh.coordinates());
  coords.reserve(nb * layers);
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  for (const auto& step : path) {
    offset += step;
    for (std::uint32_t i = 0; i < nb; ++i) coords.push_back(coords[i] + offset);
  }
  const double length = std::max(scale, total.norm());

  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(base.mesh.num_elements()) * path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto lo = static_cast<std::uint32_t>(k) * nb;
    const auto hi = lo + nb;
    for (Index e = 0; e < base.mesh.num_elements(); ++e) {
      const auto n = base.mesh.element_nodes(e);
      switch (base.mesh.element_types()[e]) {
        case ElementType::LINE2:
          cells.push_back({ElementType::QUAD4, {n[0] + lo, n[1] + lo, n[1] + hi, n[0] + hi}});
          break;
        case ElementType::TRIA3:
          cells.push_back({ElementType::WEDGE6, {n[0] + lo, n[1] + lo, n[2] + lo, n[0] + hi, n[1] + hi, n[2] + hi}});
          break;
        default:
          cells.push_back({ElementType::HEXA8,
                           {n[0] + lo, n[1] + lo, n[2] + lo, n[3] + lo, n[0] + hi, n[1] + hi, n[2] + hi, n[3] + hi}});
          break;
      }
      orient(cells.back(), coords, length);
    }
  }
  return assemble(coords, cells, std::string(region));
}

Mesh revolve_mesh_region(const Mesh& mesh, std::string_view region, const Eigen::Vector3d& axis_point,
                         const Eigen::Vector3d& axis_direction, double angle, int num_segments) {
  if (!(axis_direction.norm() > 0)) throw ValidationError("revolve axis direction must be non-zero");
  if (num_segments < 1) throw ValidationError("revolve needs at least one segment");
  if (angle == 0.0 || !std::isfinite(angle)) throw ValidationError("revolve angle must be non-zero");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (std::abs(angle) > two_pi * (1.0 + 1e-12)) throw ValidationError("revolve angle exceeds a full turn");
  if (std::abs(angle) / num_segments >= std::numbers::pi) {
    throw ValidationError("revolve segments must each span less than pi; use more segments");
  }
  const ExtractedRegion base = sweepable_base(mesh, region);
  const Eigen::Vector3d axis = axis_direction.normalized();
  const std::vector<Eigen::Vector3d> base_coords = rows_of(base.mesh.coordinates());
  const double scale = bounding_box_diagonal(base.mesh.coordinates());
  const double merge_tol = 1e-10 * scale;
  const bool full_turn = std::abs(std::abs(angle) - two_pi) <= 1e-12 * two_pi;

  const auto nb = base_coords.size();
  std::vector<char> on_axis(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const Eigen::Vector3d d = base_coords[i] - axis_point;
    on_axis[i] = (d - d.dot(axis) * axis).norm() <= merge_tol;
  }

  // ids[k][i]: node id of base node i in layer k.
  const auto S = static_cast<std::size_t>(num_segments);
  std::vector<Eigen::Vector3d> coords = base_coords;
  std::vector<std::vector<std::uint32_t>> ids(S + 1, std::vector<std::uint32_t>(nb));
  for (std::size_t i = 0; i < nb; ++i) ids[0][i] = static_cast<std::uint32_t>(i + 1);
  for (std::size_t k = 1; k <= S; ++k) {
    if (full_turn && k == S) {
      ids[k] = ids[0];
      break;
    }
    const Eigen::AngleAxisd rot(angle * static_cast<double>(k) / num_segments, axis);
    for (std::size_t i = 0; i < nb; ++i) {
      if (on_axis[i]) {
        ids[k][i] = ids[0][i];
        continue;
      }
      coords.push_back(rot * (base_coords[i] - axis_point) + axis_point);
      ids[k][i] = static_cast<std::uint32_t>(coords.size());
    }
  }

  const double length = std::max(scale, 1e-300);
  std::vector<Cell> cells;
  for (Index e = 0; e < base.mesh.num_elements(); ++e) {
    const auto type = base.mesh.element_types()[e];
    const auto span = base.mesh.element_nodes(e);
    std::vector<std::size_t> n;
    for (auto id : span) n.push_back(id - 1);
    std::size_t axis_count = 0;
    for (auto i : n) axis_count += on_axis[i] ? 1 : 0;
    // Rotate the local node order so that axis nodes come first (for
    // triangles and quads) without changing orientation.
    auto rotate_until = [&](auto&& pred) {
      for (std::size_t r = 0; r < n.size() && !pred(); ++r) std::rotate(n.begin(), n.begin() + 1, n.end());
    };
    const std::string where = "element " + std::to_string(base.element_map[static_cast<std::size_t>(e)]);
    if (axis_count == n.size()) throw ValidationError(where + " lies entirely on the revolve axis");
    if (type == ElementType::TRIA3 && axis_count == 1) {
      rotate_until([&] { return on_axis[n[0]] != 0; });
    } else if (type != ElementType::LINE2 && axis_count >= 2) {
      rotate_until([&] { return on_axis[n[0]] && on_axis[n[1]]; });
    }
    if (type == ElementType::QUAD4 && axis_count > 0 && !(axis_count == 2 && on_axis[n[0]] && on_axis[n[1]])) {
      throw ValidationError(where + ": a QUAD4 may touch the revolve axis only along a full edge");
    }

    for (std::size_t k = 0; k < S; ++k) {
      const auto& a = ids[k];
      const auto& b = ids[k + 1];
      Cell cell{ElementType::UNDEF, {}};
      if (type == ElementType::LINE2) {
        if (axis_count == 0) {
          cell = {ElementType::QUAD4, {a[n[0]], a[n[1]], b[n[1]], b[n[0]]}};
        } else if (on_axis[n[0]]) {
          cell = {ElementType::TRIA3, {a[n[0]], a[n[1]], b[n[1]]}};
        } else {
          cell = {ElementType::TRIA3, {a[n[1]], b[n[0]], a[n[0]]}};
        }
      } else if (type == ElementType::TRIA3) {
        if (axis_count == 0) {
          cell = {ElementType::WEDGE6, {a[n[0]], a[n[1]], a[n[2]], b[n[0]], b[n[1]], b[n[2]]}};
        } else if (axis_count == 1) {
          cell = {ElementType::PYRA5, {a[n[1]], a[n[2]], b[n[2]], b[n[1]], a[n[0]]}};
        } else {
          cell = {ElementType::TET4, {a[n[0]], a[n[1]], a[n[2]], b[n[2]]}};
        }
      } else {
        if (axis_count == 0) {
          cell = {ElementType::HEXA8, {a[n[0]], a[n[1]], a[n[2]], a[n[3]], b[n[0]], b[n[1]], b[n[2]], b[n[3]]}};
        } else {
          cell = {ElementType::WEDGE6, {a[n[0]], a[n[3]], b[n[3]], a[n[1]], a[n[2]], b[n[2]]}};
        }
      }
      orient(cell, coords, length);
      cells.push_back(std::move(cell));
    }
  }
  return assemble(coords, cells, std::string(region));
}

}  // namespace meshfield::transforms
