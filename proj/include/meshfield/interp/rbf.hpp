#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::interp {

enum class RbfKernel { Gaussian, Multiquadric, WendlandC2 };

/// Polynomial augmentation of the RBF system.
enum class PolynomialTail { None, Constant, Linear };

enum class RbfMode { Global, Local };

/// Kernel profiles, with s = epsilon * r:
///   gaussian      exp(-s^2)
///   multiquadric  sqrt(1 + s^2)
///   wendland_c2   (1 - s)_+^4 (4 s + 1)
template <typename Scalar>
Scalar kernel_value(RbfKernel kernel, Scalar r, Scalar epsilon) {
  using std::exp;
  using std::sqrt;
  const Scalar s = epsilon * r;
  switch (kernel) {
    case RbfKernel::Gaussian: return exp(-s * s);
    case RbfKernel::Multiquadric: return sqrt(Scalar(1) + s * s);
    case RbfKernel::WendlandC2: {
      if (s >= Scalar(1)) return Scalar(0);
      const Scalar t = Scalar(1) - s;
      return t * t * t * t * (Scalar(4) * s + Scalar(1));
    }
  }
  return Scalar(0);
}

/// phi'(r) / r, finite at r = 0. The kernel gradient with respect to x is
/// (phi'(r) / r) * (x - center).
template <typename Scalar>
Scalar kernel_derivative_over_r(RbfKernel kernel, Scalar r, Scalar epsilon) {
  using std::exp;
  using std::sqrt;
  const Scalar s = epsilon * r;
  const Scalar e2 = epsilon * epsilon;
  switch (kernel) {
    case RbfKernel::Gaussian: return Scalar(-2) * e2 * exp(-s * s);
    case RbfKernel::Multiquadric: return e2 / sqrt(Scalar(1) + s * s);
    case RbfKernel::WendlandC2: {
      if (s >= Scalar(1)) return Scalar(0);
      const Scalar t = Scalar(1) - s;
      return Scalar(-20) * e2 * t * t * t;
    }
  }
  return Scalar(0);
}

/// Gradient of phi(|x - center|) with respect to x.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> kernel_gradient(RbfKernel kernel, const Eigen::Matrix<Scalar, 3, 1>& x,
                                            const Eigen::Matrix<Scalar, 3, 1>& center,
                                            Scalar epsilon) {
  const Eigen::Matrix<Scalar, 3, 1> d = x - center;
  return kernel_derivative_over_r(kernel, d.norm(), epsilon) * d;
}

struct RbfConfig {
  RbfKernel kernel = RbfKernel::Gaussian;
  /// Shape parameter, > 0.
  double epsilon = 1.0;
  /// Added to the kernel matrix diagonal, >= 0.
  double smoothing = 0.0;
  /// Local mode: nearest neighbours used to size the neighbourhood radius.
  Index neighbors = 20;
  /// Local mode: lower bound on the neighbourhood size.
  Index min_neighbors = 5;
  /// Local mode: radius = radius_factor * mean(neighbour distances).
  double radius_factor = 1.5;
  /// Unset: None for interpolation, Linear for gradients.
  std::optional<PolynomialTail> polynomial;
};

/// Evaluates the RBF interpolant of `source_values` (one column per
/// component) at `eval_points`.
///
/// Global mode solves (K + smoothing I) c = f over all sources. Local mode
/// solves one system per evaluation point over the sources within
/// radius_factor * mean(distance to the `neighbors` nearest), but never fewer
/// than `min_neighbors` sources.
///
/// Throws SingularMatrixError when the system is (numerically) singular.
Eigen::MatrixXd rbf_interpolate(const Eigen::MatrixX3d& source_points,
                                const Eigen::MatrixXd& source_values,
                                const Eigen::MatrixX3d& eval_points, const RbfConfig& config,
                                RbfMode mode = RbfMode::Global);

/// Analytic gradient of the same interpolant; one [num_eval x 3] block per
/// value column.
std::vector<Eigen::MatrixX3d> rbf_gradient(const Eigen::MatrixX3d& source_points,
                                           const Eigen::MatrixXd& source_values,
                                           const Eigen::MatrixX3d& eval_points,
                                           const RbfConfig& config,
                                           RbfMode mode = RbfMode::Global);

/// Spatial gradient of every scalar (D = 1) step of a node or element result
/// on its own DOF locations (region nodes or element centroids). The result
/// has D = 3 and quantity "<quantity>_grad".
ResultArray spatial_gradient(const Mesh& mesh, const ResultArray& values, const RbfConfig& config,
                             RbfMode mode = RbfMode::Local);

}  // namespace meshfield::interp
