#include "meshfield/core/geometry.hpp"

#include <algorithm>
#include <set>

#include <Eigen/Geometry>

#include "meshfield/core/error.hpp"
#include "meshfield/core/log.hpp"

namespace meshfield {
namespace {

Eigen::Vector3d node(const Mesh& mesh, std::uint32_t id) {
  return mesh.coordinates().row(id - 1).transpose();
}

}  // namespace

double bounding_box_diagonal(const Eigen::Ref<const Eigen::MatrixX3d>& points) {
  if (points.rows() == 0) return 0.0;
  return (points.colwise().maxCoeff() - points.colwise().minCoeff()).norm();
}

Eigen::MatrixX3d region_node_coordinates(const Mesh& mesh, const Region& region) {
  Eigen::MatrixX3d out(static_cast<Index>(region.node_ids.size()), 3);
  for (std::size_t i = 0; i < region.node_ids.size(); ++i) {
    out.row(static_cast<Index>(i)) = mesh.coordinates().row(region.node_ids[i] - 1);
  }
  return out;
}

Eigen::MatrixX3d compute_centroids(const Mesh& mesh, const Region& region) {
  Eigen::MatrixX3d out(static_cast<Index>(region.element_ids.size()), 3);
  for (std::size_t k = 0; k < region.element_ids.size(); ++k) {
    const auto id = region.element_ids[k];
    if (id == 0 || id > mesh.num_elements()) {
      throw ValidationError("region " + region.name + ": invalid element id " + std::to_string(id));
    }
    const auto nodes = mesh.element_nodes(id - 1);
    if (nodes.empty()) {
      throw ValidationError("element " + std::to_string(id) + " has no nodes");
    }
    Eigen::RowVector3d sum = Eigen::RowVector3d::Zero();
    for (auto n : nodes) sum += mesh.coordinates().row(n - 1);
    out.row(static_cast<Index>(k)) = sum / static_cast<double>(nodes.size());
  }
  return out;
}

Eigen::MatrixX3d compute_centroids(const Mesh& mesh, std::string_view region_name) {
  return compute_centroids(mesh, mesh.region(region_name));
}

Eigen::Vector3d element_normal(const Mesh& mesh, Index element) {
  const auto type = mesh.element_types()[element];
  const auto nodes = mesh.element_nodes(element);
  Eigen::Vector3d n;
  double scale = 0.0;
  if (corner_count(type) == 3) {
    const Eigen::Vector3d p0 = node(mesh, nodes[0]);
    const Eigen::Vector3d e1 = node(mesh, nodes[1]) - p0;
    const Eigen::Vector3d e2 = node(mesh, nodes[2]) - p0;
    n = e1.cross(e2);
    scale = std::max(e1.squaredNorm(), e2.squaredNorm());
  } else {
    const Eigen::Vector3d d1 = node(mesh, nodes[2]) - node(mesh, nodes[0]);
    const Eigen::Vector3d d2 = node(mesh, nodes[3]) - node(mesh, nodes[1]);
    n = d1.cross(d2);
    scale = std::max(d1.squaredNorm(), d2.squaredNorm());
  }
  const double norm = n.norm();
  if (!(norm > 1e-12 * scale) || norm == 0.0) return Eigen::Vector3d::Zero();
  return n / norm;
}

Eigen::MatrixX3d compute_node_normals(const Mesh& mesh, const Region& region) {
  std::vector<Index> local(static_cast<std::size_t>(mesh.num_nodes()), -1);
  for (std::size_t i = 0; i < region.node_ids.size(); ++i) {
    local[region.node_ids[i] - 1] = static_cast<Index>(i);
  }
  Eigen::MatrixX3d sum = Eigen::MatrixX3d::Zero(static_cast<Index>(region.node_ids.size()), 3);
  for (auto id : region.element_ids) {
    const auto type = mesh.element_types()[id - 1];
    if (dimension(type) != 2) {
      throw ValidationError("node normals need surface elements; region " + region.name +
                            " contains " + std::string(to_string(type)));
    }
    const Eigen::Vector3d n = element_normal(mesh, id - 1);
    if (n.isZero()) {
      log_warning("skipping degenerate element " + std::to_string(id) + " in region " +
                  region.name);
      continue;
    }
    for (auto node_id : mesh.element_nodes(id - 1)) {
      const Index i = local[node_id - 1];
      if (i >= 0) sum.row(i) += n.transpose();
    }
  }
  for (Index i = 0; i < sum.rows(); ++i) {
    const double norm = sum.row(i).norm();
    if (norm > 1e-14) sum.row(i) /= norm;
    else sum.row(i).setZero();
  }
  return sum;
}

Eigen::MatrixX3d compute_node_normals(const Mesh& mesh, std::string_view region_name) {
  return compute_node_normals(mesh, mesh.region(region_name));
}

ExtractedRegion extract_region(const Mesh& mesh, std::string_view region_name) {
  const Region& region = mesh.region(region_name);
  std::set<std::uint32_t> node_set(region.node_ids.begin(), region.node_ids.end());
  int width = 0;
  for (auto id : region.element_ids) {
    for (auto n : mesh.element_nodes(id - 1)) node_set.insert(n);
    width = std::max(width, node_count(mesh.element_types()[id - 1]));
  }

  ExtractedRegion out;
  out.node_map.assign(node_set.begin(), node_set.end());
  out.element_map = region.element_ids;

  std::vector<std::uint32_t> renumber(static_cast<std::size_t>(mesh.num_nodes()) + 1, 0);
  Coordinates coords(static_cast<Index>(out.node_map.size()), 3);
  for (std::size_t i = 0; i < out.node_map.size(); ++i) {
    renumber[out.node_map[i]] = static_cast<std::uint32_t>(i + 1);
    coords.row(static_cast<Index>(i)) = mesh.coordinates().row(out.node_map[i] - 1);
  }

  std::vector<ElementType> types;
  Connectivity conn = Connectivity::Zero(static_cast<Index>(region.element_ids.size()), width);
  for (std::size_t k = 0; k < region.element_ids.size(); ++k) {
    const auto e = region.element_ids[k] - 1;
    types.push_back(mesh.element_types()[e]);
    const auto nodes = mesh.element_nodes(e);
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      conn(static_cast<Index>(k), static_cast<Index>(c)) = renumber[nodes[c]];
    }
  }

  out.mesh = Mesh(std::move(coords), std::move(types), std::move(conn));
  Region whole = whole_mesh_region(out.mesh, region.name);
  whole.dimension = region.dimension;
  whole.is_group = region.is_group;
  out.mesh.add_region(std::move(whole));
  return out;
}

}  // namespace meshfield
