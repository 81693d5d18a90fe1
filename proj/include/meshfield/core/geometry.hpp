#pragma once

#include <string_view>

#include <Eigen/Core>

#include "meshfield/core/mesh.hpp"

namespace meshfield {

/// Coordinates of the region's nodes, in region node order.
Eigen::MatrixX3d region_node_coordinates(const Mesh& mesh, const Region& region);

/// Arithmetic mean of the nodes of each region element, in region element order.
Eigen::MatrixX3d compute_centroids(const Mesh& mesh, const Region& region);
Eigen::MatrixX3d compute_centroids(const Mesh& mesh, std::string_view region_name);

/// Unit normal of a surface element from its corner nodes (right-hand rule on
/// the connectivity winding). Returns the zero vector for degenerate elements.
Eigen::Vector3d element_normal(const Mesh& mesh, Index element);

/// Averaged unit normals of the adjacent surface elements, one row per region
/// node. Throws for non-surface elements; degenerate elements are skipped with
/// a warning and nodes without any valid neighbour get a zero row.
Eigen::MatrixX3d compute_node_normals(const Mesh& mesh, const Region& region);
Eigen::MatrixX3d compute_node_normals(const Mesh& mesh, std::string_view region_name);

struct ExtractedRegion {
  Mesh mesh;
  /// Parent node id for each new node (index = new id - 1).
  IdArray node_map;
  /// Parent element id for each new element.
  IdArray element_map;
};

/// Copies one region into a standalone mesh with compact 1-based numbering.
/// The result holds a single region with the same name covering everything.
ExtractedRegion extract_region(const Mesh& mesh, std::string_view region_name);

/// Diagonal of the axis-aligned bounding box of `points`.
double bounding_box_diagonal(const Eigen::Ref<const Eigen::MatrixX3d>& points);

}  // namespace meshfield
