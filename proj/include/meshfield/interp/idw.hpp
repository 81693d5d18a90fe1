#pragma once

#include <cmath>

#include <Eigen/Core>

#include "meshfield/interp/interpolation_matrix.hpp"

namespace meshfield::interp {

enum class IdwDirection {
  Forward,   ///< neighbours searched for each target point
  Backward,  ///< neighbours searched for each source point, scattered to targets
  Auto,      ///< Forward iff num_targets <= num_sources
};

struct IdwConfig {
  /// Number of nearest neighbours (conventional default).
  Index neighbors = 20;
  /// Shepard exponent p; Shepard recommends 1 <= p <= 3.
  double exponent = 2.0;
  IdwDirection direction = IdwDirection::Auto;
};

/// Shepard weights for one neighbour set:
///   R = 1.01 * max(r),  w_i = ((R - r_i) / (R * r_i))^p
/// Distances must be positive. Weights are not normalised.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> shepard_weights(
    const Eigen::MatrixBase<Derived>& distances, typename Derived::Scalar exponent) {
  using Scalar = typename Derived::Scalar;
  const Scalar r_max = Scalar(1.01) * distances.maxCoeff();
  return ((r_max - distances.array()) / (r_max * distances.array())).pow(exponent).matrix();
}

IdwDirection resolve_direction(IdwDirection direction, Index num_sources, Index num_targets);

/// Inverse-distance-weighted operator from source points to target points.
/// A target closer than 1e-12 * R to a source point takes that value exactly.
InterpolationMatrix build_idw(const Eigen::MatrixX3d& source_points,
                              const Eigen::MatrixX3d& target_points, const IdwConfig& config,
                              DofDescriptor source = {}, DofDescriptor target = {});

}  // namespace meshfield::interp
