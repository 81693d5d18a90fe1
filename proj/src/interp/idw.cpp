#include "meshfield/interp/idw.hpp"

#include <algorithm>

#include "meshfield/core/error.hpp"
#include "meshfield/interp/kdtree.hpp"

namespace meshfield::interp {
namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kSnapTolerance = 1e-12;

/// Weights for one neighbour list. Returns the snapped neighbour position, or
/// -1 when regular Shepard weights were written to `weights`.
Index neighbour_weights(const std::vector<Neighbor>& nb, double exponent, Eigen::VectorXd& weights) {
  Eigen::VectorXd r(static_cast<Index>(nb.size()));
  for (std::size_t i = 0; i < nb.size(); ++i) r(static_cast<Index>(i)) = nb[i].distance;
  const double r_max = 1.01 * r.maxCoeff();
  if (nb.front().distance <= kSnapTolerance * r_max) return 0;
  weights = shepard_weights(r, exponent);
  return -1;
}

void check_config(const IdwConfig& config, Index num_sources) {
  if (num_sources == 0) throw ValidationError("IDW needs at least one source point");
  if (config.neighbors < 1) throw ValidationError("IDW neighbors must be >= 1");
  if (!(config.exponent > 0)) throw ValidationError("IDW exponent must be > 0");
  if (config.neighbors > num_sources) {
    throw ValidationError("IDW neighbors (" + std::to_string(config.neighbors) +
                          ") exceeds the number of source points (" + std::to_string(num_sources) + ")");
  }
}

}  // namespace

IdwDirection resolve_direction(IdwDirection direction, Index num_sources, Index num_targets) {
  if (direction != IdwDirection::Auto) return direction;
  return num_targets <= num_sources ? IdwDirection::Forward : IdwDirection::Backward;
}

InterpolationMatrix build_idw(const Eigen::MatrixX3d& source_points,
                              const Eigen::MatrixX3d& target_points, const IdwConfig& config,
                              DofDescriptor source, DofDescriptor target) {
  const Index ns = source_points.rows();
  const Index nt = target_points.rows();
  check_config(config, ns);
  const auto direction = resolve_direction(config.direction, ns, nt);
  InterpolationMatrix::Sparse weights(nt, ns);

  if (direction == IdwDirection::Forward) {
    const KdTree tree(source_points);
    std::vector<std::vector<Triplet>> rows(static_cast<std::size_t>(nt));
#pragma omp parallel for schedule(dynamic, 64)
    for (Index t = 0; t < nt; ++t) {
      const auto nb = tree.nearest(target_points.row(t).transpose(), config.neighbors);
      Eigen::VectorXd w;
      auto& row = rows[static_cast<std::size_t>(t)];
      if (neighbour_weights(nb, config.exponent, w) >= 0) {
        row.emplace_back(t, nb.front().index, 1.0);
        continue;
      }
      const double total = w.sum();
      for (std::size_t i = 0; i < nb.size(); ++i) {
        row.emplace_back(t, nb[i].index, w(static_cast<Index>(i)) / total);
      }
    }
    std::vector<Triplet> entries;
    for (auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
    weights.setFromTriplets(entries.begin(), entries.end());
    return {std::move(weights), std::move(source), std::move(target)};
  }

  if (config.neighbors > nt) {
    throw ValidationError("backward IDW: neighbors (" + std::to_string(config.neighbors) +
                          ") exceeds the number of target points (" + std::to_string(nt) + ")");
  }
  const KdTree tree(target_points);
  std::vector<std::vector<Neighbor>> lists(static_cast<std::size_t>(ns));
#pragma omp parallel for schedule(dynamic, 64)
  for (Index s = 0; s < ns; ++s) {
    lists[static_cast<std::size_t>(s)] = tree.nearest(source_points.row(s).transpose(), config.neighbors);
  }

  // Snapped targets take one source value exactly: the closest source, lowest index on ties.
  std::vector<Index> snap(static_cast<std::size_t>(nt), -1);
  std::vector<double> snap_distance(static_cast<std::size_t>(nt), 0.0);
  std::vector<Triplet> entries;
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(nt);
  for (Index s = 0; s < ns; ++s) {
    const auto& nb = lists[static_cast<std::size_t>(s)];
    Eigen::VectorXd r(static_cast<Index>(nb.size()));
    for (std::size_t i = 0; i < nb.size(); ++i) r(static_cast<Index>(i)) = nb[i].distance;
    const double r_max = 1.01 * r.maxCoeff();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto t = static_cast<std::size_t>(nb[i].index);
      if (nb[i].distance <= kSnapTolerance * r_max) {
        if (snap[t] < 0 || nb[i].distance < snap_distance[t]) {
          snap[t] = s;
          snap_distance[t] = nb[i].distance;
        }
        continue;
      }
      const double w = std::pow((r_max - nb[i].distance) / (r_max * nb[i].distance), config.exponent);
      entries.emplace_back(nb[i].index, s, w);
      row_sum(nb[i].index) += w;
    }
  }

  std::vector<Triplet> normalized;
  normalized.reserve(entries.size());
  for (const auto& e : entries) {
    if (snap[static_cast<std::size_t>(e.row())] >= 0) continue;
    normalized.emplace_back(e.row(), e.col(), e.value() / row_sum(e.row()));
  }
  std::vector<Index> unmatched;
  for (Index t = 0; t < nt; ++t) {
    if (snap[static_cast<std::size_t>(t)] >= 0) {
      normalized.emplace_back(t, snap[static_cast<std::size_t>(t)], 1.0);
    } else if (row_sum(t) == 0.0) {
      unmatched.push_back(t);
    }
  }
  weights.setFromTriplets(normalized.begin(), normalized.end());
  return {std::move(weights), std::move(source), std::move(target), std::move(unmatched)};
}

}  // namespace meshfield::interp
