#pragma once

#include <vector>

#include <Eigen/Core>

#include "meshfield/core/mesh.hpp"

namespace meshfield::interp {

struct Neighbor {
  Index index;
  double distance;
};

/// Static 3-D k-d tree. Query results are ordered by distance, ties broken by
/// the lower point index, so queries are deterministic.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(Eigen::MatrixX3d points);

  Index size() const { return points_.rows(); }
  const Eigen::MatrixX3d& points() const { return points_; }

  /// The min(k, size()) nearest points.
  std::vector<Neighbor> nearest(const Eigen::Vector3d& query, Index k) const;
  Neighbor nearest(const Eigen::Vector3d& query) const;
  /// All points with distance <= radius.
  std::vector<Neighbor> within_radius(const Eigen::Vector3d& query, double radius) const;

 private:
  struct Node {
    Index begin = 0;
    Index end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    Index left = -1;
    Index right = -1;
  };

  Index build(Index begin, Index end);

  Eigen::MatrixX3d points_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
};

}  // namespace meshfield::interp
