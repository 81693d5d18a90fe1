#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::transforms {

/// Rotation for Euler angles (alpha, beta, gamma) in radians, intrinsic
/// Z-Y'-X'' order: gamma about z, then beta about the new y, then alpha about
/// the newest x. Equivalently R = Rz(gamma) * Ry(beta) * Rx(alpha), so a pure
/// rotation about z is carried by gamma.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> euler_rotation(Scalar alpha, Scalar beta, Scalar gamma) {
  using Axis = Eigen::AngleAxis<Scalar>;
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  return (Axis(gamma, Vec::UnitZ()) * Axis(beta, Vec::UnitY()) * Axis(alpha, Vec::UnitX())).toRotationMatrix();
}

/// x' = R x + t.
struct RigidTransform {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  /// (alpha, beta, gamma), see euler_rotation.
  Eigen::Vector3d euler_angles = Eigen::Vector3d::Zero();

  Eigen::Matrix3d rotation() const {
    return euler_rotation(euler_angles.x(), euler_angles.y(), euler_angles.z());
  }

  /// Applies the transform to every row of a point block.
  template <typename Derived>
  Eigen::Matrix<double, Eigen::Dynamic, 3> apply(const Eigen::MatrixBase<Derived>& points) const {
    return (points * rotation().transpose()).rowwise() + translation.transpose();
  }
};

/// Euler angles (alpha, beta, gamma) of a rotation matrix, inverse of
/// euler_rotation with beta in [-pi/2, pi/2].
Eigen::Vector3d euler_angles_from_rotation(const Eigen::Matrix3d& rotation);

/// Sweeps a 1-D or 2-D region along a polyline of offsets. Layer k sits at the
/// sum of the first k offsets. LINE2 -> QUAD4, TRIA3 -> WEDGE6,
/// QUAD4 -> HEXA8. The returned mesh holds the swept elements in one region
/// named after the base region.
Mesh extrude_mesh_region(const Mesh& mesh, std::string_view region,
                         const std::vector<Eigen::Vector3d>& path);

/// Sweeps a 1-D or 2-D region around an axis. Nodes on the axis are shared by
/// all layers, and a full turn closes onto the first layer. Elements touching
/// the axis collapse: LINE2 -> TRIA3, QUAD4 with an axis edge -> WEDGE6,
/// TRIA3 with an axis node -> PYRA5, TRIA3 with an axis edge -> TET4.
Mesh revolve_mesh_region(const Mesh& mesh, std::string_view region, const Eigen::Vector3d& axis_point,
                         const Eigen::Vector3d& axis_direction, double angle, int num_segments);

struct TransformedData {
  Mesh mesh;
  std::vector<ResultArray> arrays;
};

/// Moves the nodes of `regions` (all nodes when empty) and rotates the given
/// vector results (D = 3). Translation does not apply to vectors.
TransformedData transform_mesh_data(const Mesh& mesh, const std::vector<std::string>& regions,
                                    const RigidTransform& transform,
                                    const std::vector<ResultArray>& vector_arrays = {});

struct FitOptions {
  int max_iterations = 500;
  /// Stop once the objective spread over the simplex falls below this.
  double tolerance = 1e-12;
  int restarts = 3;
  std::uint32_t seed = 0x5eed;
  /// Called once per optimizer iteration with the best objective so far.
  std::function<void(int iteration, double objective)> monitor;
};

struct FitResult {
  RigidTransform transform;
  double objective = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Rigid registration: minimises the sum over source region nodes of the
/// squared distance to the nearest target region node.
FitResult fit_mesh(const Mesh& source_mesh, std::string_view source_region, const Mesh& target_mesh,
                   std::string_view target_region, std::optional<RigidTransform> init = std::nullopt,
                   const FitOptions& options = {});

/// The fit objective for a given transform, exposed for checking results.
double fit_objective(const Mesh& source_mesh, std::string_view source_region, const Mesh& target_mesh,
                     std::string_view target_region, const RigidTransform& transform);

}  // namespace meshfield::transforms
