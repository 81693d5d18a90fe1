#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "meshfield/core/mesh.hpp"
#include "meshfield/interp/interpolation_matrix.hpp"

namespace meshfield::interp {

struct ProjectionConfig {
  /// Constant projection direction. When neither this nor `node_directions`
  /// is set, target node normals are used.
  std::optional<Eigen::Vector3d> direction;
  /// One direction per target region node (overrides `direction`).
  Eigen::MatrixX3d node_directions;
  /// Largest accepted distance along the direction.
  double max_distance = 1.0;
  /// Source elements whose centroid is within this radius of a target node
  /// are projection candidates.
  double search_radius = 1.0;
};

/// Linear shape-function weights of a point given in local coordinates.
/// Triangles use barycentric (xi, eta) in the unit triangle; quadrilaterals use
/// bilinear (xi, eta) in [-1, 1]^2 with the usual corner ordering.
Eigen::Vector3d triangle_shape(double xi, double eta);
Eigen::Vector4d quad_shape(double xi, double eta);

/// Projects target region nodes along their direction onto the source surface
/// region and interpolates with linear shape functions of the hit element.
/// Quadratic source elements are linearised through their corner nodes.
/// Targets without a hit within `max_distance` give unmatched rows (one
/// warning each); no candidate element for any target is an error.
InterpolationMatrix build_projection(const Mesh& source_mesh, std::string_view source_region,
                                     const Mesh& target_mesh, std::string_view target_region,
                                     const ProjectionConfig& config);

}  // namespace meshfield::interp
