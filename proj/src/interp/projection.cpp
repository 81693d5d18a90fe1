#include "meshfield/interp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/core/log.hpp"
#include "meshfield/interp/kdtree.hpp"

namespace meshfield::interp {
namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kInsideTolerance = 1e-8;
constexpr double kNewtonTolerance = 1e-10;
constexpr int kNewtonIterations = 20;

struct Hit {
  double distance = std::numeric_limits<double>::infinity();
  Index element = -1;
  int corners = 0;
  Eigen::Vector4d weights = Eigen::Vector4d::Zero();
};

/// Ray x + s d against the triangle (p0, p1, p2).
bool intersect_triangle(const Eigen::Vector3d& x, const Eigen::Vector3d& d,
                        const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                        const Eigen::Vector3d& p2, double& s, Eigen::Vector3d& w) {
  Eigen::Matrix3d a;
  a.col(0) = p1 - p0;
  a.col(1) = p2 - p0;
  a.col(2) = -d;
  const double scale = a.col(0).norm() * a.col(1).norm() * d.norm();
  if (!(std::abs(a.determinant()) > 1e-14 * scale)) return false;
  const Eigen::Vector3d sol = a.partialPivLu().solve(x - p0);
  const double xi = sol(0), eta = sol(1);
  if (xi < -kInsideTolerance || eta < -kInsideTolerance || xi + eta > 1.0 + kInsideTolerance) return false;
  s = sol(2);
  w = triangle_shape(xi, eta);
  return true;
}

/// Ray x + s d against the bilinear patch through four corners (Newton).
bool intersect_quad(const Eigen::Vector3d& x, const Eigen::Vector3d& d,
                    const Eigen::Matrix<double, 3, 4>& p, double& s, Eigen::Vector4d& w) {
  double xi = 0.0, eta = 0.0;
  s = d.dot(p.rowwise().mean() - x) / d.squaredNorm();
  bool converged = false;
  for (int it = 0; it < kNewtonIterations; ++it) {
    const Eigen::Vector4d n = quad_shape(xi, eta);
    const Eigen::Vector4d dn_dxi(-(1 - eta), (1 - eta), (1 + eta), -(1 + eta));
    const Eigen::Vector4d dn_deta(-(1 - xi), -(1 + xi), (1 + xi), (1 - xi));
    const Eigen::Vector3d residual = p * n - x - s * d;
    Eigen::Matrix3d jac;
    jac.col(0) = p * dn_dxi * 0.25;
    jac.col(1) = p * dn_deta * 0.25;
    jac.col(2) = -d;
    const double scale = jac.col(0).norm() * jac.col(1).norm() * d.norm();
    if (!(std::abs(jac.determinant()) > 1e-14 * scale)) return false;
    const Eigen::Vector3d step = jac.partialPivLu().solve(residual);
    xi -= step(0);
    eta -= step(1);
    s -= step(2);
    if (step.head<2>().lpNorm<Eigen::Infinity>() < kNewtonTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;
  if (std::abs(xi) > 1.0 + kInsideTolerance || std::abs(eta) > 1.0 + kInsideTolerance) return false;
  w = quad_shape(xi, eta);
  return true;
}

}  // namespace

Eigen::Vector3d triangle_shape(double xi, double eta) { return {1.0 - xi - eta, xi, eta}; }

Eigen::Vector4d quad_shape(double xi, double eta) {
  return 0.25 * Eigen::Vector4d((1 - xi) * (1 - eta), (1 + xi) * (1 - eta), (1 + xi) * (1 + eta),
                                (1 - xi) * (1 + eta));
}

InterpolationMatrix build_projection(const Mesh& source_mesh, std::string_view source_region,
                                     const Mesh& target_mesh, std::string_view target_region,
                                     const ProjectionConfig& config) {
  if (!(config.search_radius > 0)) throw ValidationError("search_radius must be > 0");
  if (!(config.max_distance > 0)) throw ValidationError("max_distance must be > 0");
  const Region& src = source_mesh.region(source_region);
  const Region& tgt = target_mesh.region(target_region);
  for (auto id : src.element_ids) {
    const auto type = source_mesh.element_types()[id - 1];
    if (dimension(type) != 2) {
      throw ValidationError("projection source region " + src.name + " must contain surface elements, found " +
                            std::string(to_string(type)));
    }
  }

  const Eigen::MatrixX3d targets = region_node_coordinates(target_mesh, tgt);
  const Index nt = targets.rows();
  if (config.node_directions.size() > 0 && config.node_directions.rows() != nt) {
    throw ValidationError("node_directions needs one row per target node (" + std::to_string(nt) + ")");
  }

  Eigen::MatrixX3d directions(nt, 3);
  if (config.node_directions.size() > 0) {
    directions = config.node_directions;
  } else if (config.direction) {
    directions = config.direction->transpose().replicate(nt, 1);
  } else {
    bool surface = !tgt.element_ids.empty();
    for (auto id : tgt.element_ids) surface = surface && dimension(target_mesh.element_types()[id - 1]) == 2;
    directions = surface ? compute_node_normals(target_mesh, tgt) : Eigen::MatrixX3d::Zero(nt, 3);
  }

  std::vector<Index> src_local(static_cast<std::size_t>(source_mesh.num_nodes()) + 1, -1);
  for (std::size_t i = 0; i < src.node_ids.size(); ++i) src_local[src.node_ids[i]] = static_cast<Index>(i);

  const Eigen::MatrixX3d centroids = compute_centroids(source_mesh, src);
  const KdTree tree(centroids);

  std::vector<Hit> hits(static_cast<std::size_t>(nt));
  std::vector<char> had_candidate(static_cast<std::size_t>(nt), 0);
  std::vector<char> fallback(static_cast<std::size_t>(nt), 0);

#pragma omp parallel for schedule(dynamic, 32)
  for (Index t = 0; t < nt; ++t) {
    const Eigen::Vector3d x = targets.row(t).transpose();
    Eigen::Vector3d d = directions.row(t).transpose();
    if (!(d.norm() > 1e-14)) {
      const auto nearest = tree.nearest(x);
      if (nearest.index < 0) continue;
      d = element_normal(source_mesh, src.element_ids[static_cast<std::size_t>(nearest.index)] - 1);
      fallback[static_cast<std::size_t>(t)] = 1;
      if (d.isZero()) continue;
    }
    d.normalize();
    const auto candidates = tree.within_radius(x, config.search_radius);
    if (!candidates.empty()) had_candidate[static_cast<std::size_t>(t)] = 1;
    Hit best;
    for (const auto& c : candidates) {
      const Index e = src.element_ids[static_cast<std::size_t>(c.index)] - 1;
      const auto nodes = source_mesh.element_nodes(e);
      const int corners = corner_count(source_mesh.element_types()[e]);
      double s = 0.0;
      Eigen::Vector4d w = Eigen::Vector4d::Zero();
      bool ok = false;
      if (corners == 3) {
        Eigen::Vector3d w3;
        ok = intersect_triangle(x, d, source_mesh.coordinates().row(nodes[0] - 1).transpose(),
                                source_mesh.coordinates().row(nodes[1] - 1).transpose(),
                                source_mesh.coordinates().row(nodes[2] - 1).transpose(), s, w3);
        w.head<3>() = w3;
      } else {
        Eigen::Matrix<double, 3, 4> p;
        for (int a = 0; a < 4; ++a) p.col(a) = source_mesh.coordinates().row(nodes[a] - 1).transpose();
        ok = intersect_quad(x, d, p, s, w);
      }
      if (!ok || std::abs(s) > config.max_distance) continue;
      if (std::abs(s) < best.distance) best = Hit{std::abs(s), e, corners, w};
    }
    hits[static_cast<std::size_t>(t)] = best;
  }

  if (nt > 0 && std::none_of(had_candidate.begin(), had_candidate.end(), [](char c) { return c != 0; })) {
    throw ValidationError("projection: no source element centroid within search_radius " +
                          std::to_string(config.search_radius) + " of any target node");
  }

  std::vector<Triplet> entries;
  std::vector<Index> unmatched;
  for (Index t = 0; t < nt; ++t) {
    const auto& hit = hits[static_cast<std::size_t>(t)];
    if (fallback[static_cast<std::size_t>(t)]) {
      log_warning("target node " + std::to_string(tgt.node_ids[static_cast<std::size_t>(t)]) +
                  ": degenerate normal, using nearest source element normal");
    }
    if (hit.element < 0) {
      unmatched.push_back(t);
      log_warning("target node " + std::to_string(tgt.node_ids[static_cast<std::size_t>(t)]) +
                  " has no projection onto region " + src.name);
      continue;
    }
    const auto nodes = source_mesh.element_nodes(hit.element);
    for (int a = 0; a < hit.corners; ++a) {
      const Index col = src_local[nodes[static_cast<std::size_t>(a)]];
      if (col < 0) {
        throw ValidationError("source element " + std::to_string(hit.element + 1) +
                              " uses a node outside region " + src.name);
      }
      if (hit.weights(a) != 0.0) entries.emplace_back(t, col, hit.weights(a));
    }
  }

  InterpolationMatrix::Sparse weights(nt, static_cast<Index>(src.node_ids.size()));
  weights.setFromTriplets(entries.begin(), entries.end());
  return {std::move(weights), {src.name, ResType::NODE}, {tgt.name, ResType::NODE}, std::move(unmatched)};
}

}  // namespace meshfield::interp
