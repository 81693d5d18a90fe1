#include "meshfield/interp/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace meshfield::interp {
namespace {

constexpr Index kLeafSize = 12;

struct Candidate {
  double dist2;
  Index index;
  bool operator<(const Candidate& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

}  // namespace

KdTree::KdTree(Eigen::MatrixX3d points) : points_(std::move(points)) {
  order_.resize(static_cast<std::size_t>(points_.rows()));
  std::iota(order_.begin(), order_.end(), Index{0});
  if (points_.rows() > 0) build(0, points_.rows());
}

Index KdTree::build(Index begin, Index end) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Eigen::RowVector3d lo = Eigen::RowVector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::RowVector3d hi = -lo;
  for (Index i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_.row(order_[i]));
    hi = hi.cwiseMax(points_.row(order_[i]));
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi(axis) - lo(axis) <= 0.0) return id;  // all points coincide

  const Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](Index a, Index b) { return points_(a, axis) < points_(b, axis); });
  const double split = points_(order_[mid], axis);

  const Index left = build(begin, mid);
  const Index right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

std::vector<Neighbor> KdTree::nearest(const Eigen::Vector3d& query, Index k) const {
  k = std::min(k, size());
  std::vector<Neighbor> out;
  if (k <= 0) return out;

  std::priority_queue<Candidate> heap;  // worst candidate on top
  auto worst = [&] {
    return heap.size() < static_cast<std::size_t>(k) ? std::numeric_limits<double>::infinity()
                                                     : heap.top().dist2;
  };
  auto visit = [&](auto&& self, Index id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.axis < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index p = order_[i];
        const Candidate c{(points_.row(p).transpose() - query).squaredNorm(), p};
        if (heap.size() < static_cast<std::size_t>(k)) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double diff = query(node.axis) - node.split;
    const Index near = diff < 0 ? node.left : node.right;
    const Index far = diff < 0 ? node.right : node.left;
    self(self, near);
    if (diff * diff <= worst()) self(self, far);
  };
  visit(visit, 0);

  out.resize(heap.size());
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = Neighbor{heap.top().index, std::sqrt(heap.top().dist2)};
    heap.pop();
  }
  return out;
}

Neighbor KdTree::nearest(const Eigen::Vector3d& query) const {
  auto result = nearest(query, 1);
  return result.empty() ? Neighbor{-1, std::numeric_limits<double>::infinity()} : result.front();
}

std::vector<Neighbor> KdTree::within_radius(const Eigen::Vector3d& query, double radius) const {
  std::vector<Candidate> found;
  if (size() == 0 || radius < 0) return {};
  const double r2 = radius * radius;
  auto visit = [&](auto&& self, Index id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.axis < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index p = order_[i];
        const double d2 = (points_.row(p).transpose() - query).squaredNorm();
        if (d2 <= r2) found.push_back({d2, p});
      }
      return;
    }
    const double diff = query(node.axis) - node.split;
    if (diff <= radius) self(self, node.left);
    if (diff >= -radius) self(self, node.right);
  };
  visit(visit, 0);
  std::sort(found.begin(), found.end());
  std::vector<Neighbor> out;
  out.reserve(found.size());
  for (const auto& c : found) out.push_back({c.index, std::sqrt(c.dist2)});
  return out;
}

}  // namespace meshfield::interp
