#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/interp/kdtree.hpp"
#include "meshfield/transforms/transforms.hpp"

namespace meshfield::transforms {
namespace {

using Params = Eigen::Matrix<double, 6, 1>;

/// Registration problem in scaled parameters: translation in units of the
/// source bounding-box diagonal, rotation about the source centroid.
class FitProblem {
 public:
  FitProblem(Eigen::MatrixX3d source, const Eigen::MatrixX3d& target)
      : source_(std::move(source)), tree_(target) {
    if (source_.rows() == 0) throw ValidationError("fit_mesh: source region has no nodes");
    if (target.rows() == 0) throw ValidationError("fit_mesh: target region has no nodes");
    if (!(bounding_box_diagonal(target) > 0)) {
      throw ValidationError("fit_mesh: degenerate target region (all nodes coincide)");
    }
    centroid_ = source_.colwise().mean().transpose();
    scale_ = bounding_box_diagonal(source_);
    if (!(scale_ > 0)) scale_ = bounding_box_diagonal(target);
    centred_ = source_.rowwise() - centroid_.transpose();
  }

  double operator()(const Params& p) const {
    ++evaluations;
    const Eigen::Matrix3d rot = euler_rotation(p(3), p(4), p(5));
    const Eigen::Vector3d shift = centroid_ + scale_ * p.head<3>();
    double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
    for (Index i = 0; i < centred_.rows(); ++i) {
      const Eigen::Vector3d x = rot * centred_.row(i).transpose() + shift;
      const double d = tree_.nearest(x).distance;
      sum += d * d;
    }
    return sum;
  }

  RigidTransform to_transform(const Params& p) const {
    RigidTransform t;
    t.euler_angles = p.tail<3>();
    t.translation = centroid_ + scale_ * p.head<3>() - t.rotation() * centroid_;
    return t;
  }

  Params to_params(const RigidTransform& t) const {
    Params p;
    p.head<3>() = (t.translation + t.rotation() * centroid_ - centroid_) / scale_;
    p.tail<3>() = t.euler_angles;
    return p;
  }

  mutable int evaluations = 0;

 private:
  Eigen::MatrixX3d source_;
  Eigen::MatrixX3d centred_;
  Eigen::Vector3d centroid_;
  double scale_ = 1.0;
  interp::KdTree tree_;
};

struct Vertex {
  Params x;
  double f;
};

/// Nelder-Mead simplex search from `start` with per-coordinate step sizes.
/// `on_iteration` receives the best objective after every iteration.
template <typename F, typename Monitor>
Vertex nelder_mead(const F& f, const Params& start, const Params& steps, int max_iterations, double tolerance,
                   int& iterations, Monitor&& on_iteration) {
  std::array<Vertex, 7> simplex;
  simplex[0] = {start, f(start)};
  for (int i = 0; i < 6; ++i) {
    Params x = start;
    x(i) += steps(i);
    simplex[static_cast<std::size_t>(i + 1)] = {x, f(x)};
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  for (int it = 0; it < max_iterations; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.back().f - simplex.front().f <= tolerance) break;
    ++iterations;
    Params centroid = Params::Zero();
    for (int i = 0; i < 6; ++i) centroid += simplex[static_cast<std::size_t>(i)].x;
    centroid /= 6.0;
    Vertex& worst = simplex.back();
    const Params xr = centroid + (centroid - worst.x);
    const double fr = f(xr);
    if (fr < simplex.front().f) {
      const Params xe = centroid + 2.0 * (centroid - worst.x);
      const double fe = f(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[5].f) {
      worst = {xr, fr};
    } else {
      const bool outside = fr < worst.f;
      const Params xc = outside ? Params(centroid + 0.5 * (xr - centroid)) : Params(centroid + 0.5 * (worst.x - centroid));
      const double fc = f(xc);
      if (fc < std::min(fr, worst.f)) {
        worst = {xc, fc};
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          simplex[i].x = simplex[0].x + 0.5 * (simplex[i].x - simplex[0].x);
          simplex[i].f = f(simplex[i].x);
        }
      }
    }
    on_iteration(std::min_element(simplex.begin(), simplex.end(), by_value)->f);
  }
  return *std::min_element(simplex.begin(), simplex.end(), by_value);
}

Eigen::MatrixX3d region_nodes(const Mesh& mesh, std::string_view name) {
  return region_node_coordinates(mesh, mesh.region(name));
}

}  // namespace

double fit_objective(const Mesh& source_mesh, std::string_view source_region, const Mesh& target_mesh,
                     std::string_view target_region, const RigidTransform& transform) {
  const Eigen::MatrixX3d moved = transform.apply(region_nodes(source_mesh, source_region));
  const interp::KdTree tree(region_nodes(target_mesh, target_region));
  double sum = 0.0;
  for (Index i = 0; i < moved.rows(); ++i) {
    const double d = tree.nearest(moved.row(i).transpose()).distance;
    sum += d * d;
  }
  return sum;
}

FitResult fit_mesh(const Mesh& source_mesh, std::string_view source_region, const Mesh& target_mesh,
                   std::string_view target_region, std::optional<RigidTransform> init, const FitOptions& options) {
  if (options.max_iterations < 1) throw ValidationError("fit_mesh: max_iterations must be >= 1");
  if (options.restarts < 0) throw ValidationError("fit_mesh: restarts must be >= 0");
  const FitProblem problem(region_nodes(source_mesh, source_region), region_nodes(target_mesh, target_region));

  // Initial simplex: 5 % of the model size in translation, ~3 degrees in rotation.
  const Params steps = Params::Constant(0.05);
  Vertex best{problem.to_params(init.value_or(RigidTransform{})), 0.0};
  best.f = problem(best.x);
  int iterations = 0;
  auto monitor = [&](double f) {
    if (options.monitor) options.monitor(iterations, std::min(f, best.f));
  };

  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int run = 0; run <= options.restarts; ++run) {
    Params start = best.x;
    Params run_steps = steps;
    if (run > 0) {
      // Random restart around the incumbent with a fresh, randomly scaled simplex.
      for (int i = 0; i < 6; ++i) {
        start(i) += 0.5 * steps(i) * jitter(rng);
        run_steps(i) *= 0.5 + std::abs(jitter(rng));
      }
    }
    const Vertex found = nelder_mead(problem, start, run_steps, options.max_iterations, options.tolerance,
                                     iterations, monitor);
    if (found.f < best.f) best = found;
  }

  return {problem.to_transform(best.x), best.f, iterations, problem.evaluations};
}

}  // namespace meshfield::transforms
