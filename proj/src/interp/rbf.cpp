#include "meshfield/interp/rbf.hpp"

#include <exception>
#include <mutex>

#include <Eigen/Dense>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/interp/kdtree.hpp"

namespace meshfield::interp {
namespace {

constexpr double kMinRcond = 1e-14;

/// Polynomial tail basis: 1 and the affine coordinates of the points along the
/// principal directions they actually span (so 1-D or planar point sets still
/// give a solvable system).
struct TailBasis {
  Index size = 0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 3, Eigen::Dynamic> directions;  // scaled: p_j(x) = dir_j . (x - center)

  TailBasis(PolynomialTail tail, const Eigen::MatrixX3d& points) {
    if (tail == PolynomialTail::None) return;
    size = 1;
    if (tail == PolynomialTail::Constant || points.rows() < 2) return;
    center = points.colwise().mean().transpose();
    const Eigen::MatrixX3d centered = points.rowwise() - center.transpose();
    const double extent = centered.rowwise().norm().maxCoeff();
    if (!(extent > 0)) return;
    Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centered, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index kept = 0;
    while (kept < 3 && sv(kept) > 1e-10 * sv(0)) ++kept;
    directions = svd.matrixV().leftCols(kept) / extent;
    size += kept;
  }

  Eigen::RowVectorXd evaluate(const Eigen::Vector3d& x) const {
    Eigen::RowVectorXd row(size);
    if (size == 0) return row;
    row(0) = 1.0;
    if (size > 1) row.tail(size - 1) = (x - center).transpose() * directions;
    return row;
  }
};

PolynomialTail resolve_tail(const RbfConfig& config, PolynomialTail fallback) {
  return config.polynomial.value_or(fallback);
}

void check_config(const RbfConfig& config, RbfMode mode, const Eigen::MatrixX3d& sources,
                  const Eigen::MatrixXd& values) {
  if (!(config.epsilon > 0)) throw ValidationError("RBF epsilon must be > 0");
  if (!(config.smoothing >= 0)) throw ValidationError("RBF smoothing must be >= 0");
  if (sources.rows() == 0) throw ValidationError("RBF needs at least one source point");
  if (values.rows() != sources.rows()) {
    throw ValidationError("RBF source values have " + std::to_string(values.rows()) + " rows for " +
                          std::to_string(sources.rows()) + " source points");
  }
  if (mode == RbfMode::Local) {
    if (config.min_neighbors < 1) throw ValidationError("RBF min_neighbors must be >= 1");
    if (config.neighbors < config.min_neighbors) {
      throw ValidationError("RBF neighbors must be >= min_neighbors");
    }
    if (!(config.radius_factor > 0)) throw ValidationError("RBF radius_factor must be > 0");
  }
}

/// Interpolant over one set of centres: kernel coefficients and tail weights
/// per value column.
struct Fit {
  TailBasis tail;
  Eigen::MatrixXd kernel_coeffs;
  Eigen::MatrixXd tail_coeffs;
};

template <typename Rows>
Fit solve(const Eigen::MatrixX3d& centres, const Rows& values, const RbfConfig& config,
          PolynomialTail tail_kind) {
  const Index n = centres.rows();
  Fit fit{TailBasis(tail_kind, centres), {}, {}};
  const Index m = fit.tail.size;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + m, n + m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double k = kernel_value(config.kernel, (centres.row(i) - centres.row(j)).norm(), config.epsilon);
      a(i, j) = k;
      a(j, i) = k;
    }
    a(i, i) += config.smoothing;
    if (m > 0) {
      a.block(i, n, 1, m) = fit.tail.evaluate(centres.row(i).transpose());
      a.block(n, i, m, 1) = a.block(i, n, 1, m).transpose();
    }
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, values.cols());
  rhs.topRows(n) = values;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinRcond)) {
    throw SingularMatrixError("RBF system is singular (rcond " + std::to_string(rcond) +
                              "); duplicate source points or an ill-conditioned epsilon, use smoothing > 0");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);
  fit.kernel_coeffs = sol.topRows(n);
  fit.tail_coeffs = sol.bottomRows(m);
  return fit;
}

Eigen::RowVectorXd evaluate_value(const Fit& fit, const Eigen::MatrixX3d& centres, const Eigen::Vector3d& x,
                                  const RbfConfig& config) {
  Eigen::RowVectorXd phi(centres.rows());
  for (Index j = 0; j < centres.rows(); ++j) {
    phi(j) = kernel_value(config.kernel, (x - centres.row(j).transpose()).norm(), config.epsilon);
  }
  Eigen::RowVectorXd out = phi * fit.kernel_coeffs;
  if (fit.tail.size > 0) {
    out += fit.tail.evaluate(x) * fit.tail_coeffs;
  }
  return out;
}

/// [3 x columns] gradient at x.
Eigen::Matrix3Xd evaluate_gradient(const Fit& fit, const Eigen::MatrixX3d& centres, const Eigen::Vector3d& x,
                                   const RbfConfig& config) {
  Eigen::Matrix3Xd dphi(3, centres.rows());
  for (Index j = 0; j < centres.rows(); ++j) {
    dphi.col(j) = kernel_gradient<double>(config.kernel, x, centres.row(j).transpose(), config.epsilon);
  }
  Eigen::Matrix3Xd out = dphi * fit.kernel_coeffs;
  if (fit.tail.size > 1) out += fit.tail.directions * fit.tail_coeffs.bottomRows(fit.tail.size - 1);
  return out;
}

std::vector<Index> local_neighbourhood(const KdTree& tree, const Eigen::Vector3d& x, const RbfConfig& config) {
  const auto nearest = tree.nearest(x, config.neighbors);
  double mean = 0.0;
  for (const auto& nb : nearest) mean += nb.distance;
  mean /= static_cast<double>(nearest.size());
  auto within = tree.within_radius(x, config.radius_factor * mean);
  if (static_cast<Index>(within.size()) < std::min(config.min_neighbors, tree.size())) {
    within = tree.nearest(x, config.min_neighbors);
  }
  std::vector<Index> ids;
  ids.reserve(within.size());
  for (const auto& nb : within) ids.push_back(nb.index);
  return ids;
}

/// Runs `body(x, centres, values)` once per evaluation point with the centres
/// the mode prescribes. Exceptions thrown inside the parallel loop are
/// rethrown after it.
template <typename Body>
void for_each_eval(const Eigen::MatrixX3d& sources, const Eigen::MatrixXd& values,
                   const Eigen::MatrixX3d& eval, const RbfConfig& config, RbfMode mode,
                   PolynomialTail tail, Body&& body) {
  if (mode == RbfMode::Global) {
    const Fit fit = solve(sources, values, config, tail);
#pragma omp parallel for schedule(static)
    for (Index e = 0; e < eval.rows(); ++e) body(e, fit, sources);
    return;
  }
  const KdTree tree(sources);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 16)
  for (Index e = 0; e < eval.rows(); ++e) {
    try {
      const auto ids = local_neighbourhood(tree, eval.row(e).transpose(), config);
      Eigen::MatrixX3d centres(static_cast<Index>(ids.size()), 3);
      Eigen::MatrixXd local_values(static_cast<Index>(ids.size()), values.cols());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        centres.row(static_cast<Index>(i)) = sources.row(ids[i]);
        local_values.row(static_cast<Index>(i)) = values.row(ids[i]);
      }
      const Fit fit = solve(centres, local_values, config, tail);
      body(e, fit, centres);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Eigen::MatrixXd rbf_interpolate(const Eigen::MatrixX3d& source_points, const Eigen::MatrixXd& source_values,
                                const Eigen::MatrixX3d& eval_points, const RbfConfig& config, RbfMode mode) {
  check_config(config, mode, source_points, source_values);
  Eigen::MatrixXd out(eval_points.rows(), source_values.cols());
  for_each_eval(source_points, source_values, eval_points, config, mode,
                resolve_tail(config, PolynomialTail::None),
                [&](Index e, const Fit& fit, const Eigen::MatrixX3d& centres) {
                  out.row(e) = evaluate_value(fit, centres, eval_points.row(e).transpose(), config);
                });
  return out;
}

std::vector<Eigen::MatrixX3d> rbf_gradient(const Eigen::MatrixX3d& source_points,
                                           const Eigen::MatrixXd& source_values,
                                           const Eigen::MatrixX3d& eval_points, const RbfConfig& config,
                                           RbfMode mode) {
  check_config(config, mode, source_points, source_values);
  std::vector<Eigen::MatrixX3d> out(static_cast<std::size_t>(source_values.cols()),
                                    Eigen::MatrixX3d(eval_points.rows(), 3));
  for_each_eval(source_points, source_values, eval_points, config, mode,
                resolve_tail(config, PolynomialTail::Linear),
                [&](Index e, const Fit& fit, const Eigen::MatrixX3d& centres) {
                  const Eigen::Matrix3Xd g = evaluate_gradient(fit, centres, eval_points.row(e).transpose(), config);
                  for (Index c = 0; c < g.cols(); ++c) out[static_cast<std::size_t>(c)].row(e) = g.col(c).transpose();
                });
  return out;
}

ResultArray spatial_gradient(const Mesh& mesh, const ResultArray& values, const RbfConfig& config, RbfMode mode) {
  if (!values.is_field()) throw ValidationError("spatial gradient needs field data, " + values.quantity() + " is history data");
  if (values.num_dims() != 1) {
    throw ValidationError("spatial gradient needs a scalar quantity, " + values.quantity() + " has " +
                          std::to_string(values.num_dims()) + " components");
  }
  const Region& region = mesh.region(values.region());
  const Eigen::MatrixX3d points = values.res_type() == ResType::NODE ? region_node_coordinates(mesh, region)
                                                                     : compute_centroids(mesh, region);
  if (points.rows() != values.num_dofs()) {
    throw ValidationError("result " + values.quantity() + " has M=" + std::to_string(values.num_dofs()) +
                          " but region " + region.name + " has " + std::to_string(points.rows()) + " DOF locations");
  }

  // Every step (and the imaginary parts) shares the same kernel systems, so
  // they are solved together as columns.
  const Index n = values.num_steps();
  const Index m = values.num_dofs();
  const Index columns = values.is_complex() ? 2 * n : n;
  Eigen::MatrixXd f(m, columns);
  f.leftCols(n) = values.real().transpose();
  if (values.is_complex()) f.rightCols(n) = values.imag().transpose();
  const auto grads = rbf_gradient(points, f, points, config, mode);

  ResultArray::Data re(n, m * 3);
  ResultArray::Data im;
  if (values.is_complex()) im.resize(n, m * 3);
  for (Index k = 0; k < n; ++k) {
    Eigen::Map<ResultArray::Data>(re.row(k).data(), m, 3) = grads[static_cast<std::size_t>(k)];
    if (values.is_complex()) {
      Eigen::Map<ResultArray::Data>(im.row(k).data(), m, 3) = grads[static_cast<std::size_t>(n + k)];
    }
  }
  ResultMeta meta = values.meta();
  meta.quantity += "_grad";
  meta.dim_names = default_dim_names(3);
  meta.is_complex = values.is_complex();
  return ResultArray(std::move(meta), {n, m, 3}, values.step_values(), std::move(re), std::move(im));
}

}  // namespace meshfield::interp
