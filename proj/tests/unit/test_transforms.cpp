#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/transforms/transforms.hpp"
#include "meshes.hpp"
#include "random_data.hpp"

using namespace meshfield;
using namespace meshfield::transforms;

namespace {

constexpr double kPi = std::numbers::pi;

using fixtures::from_cells;
using fixtures::registration_surface;

Mesh unit_quad() {
  return from_cells({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {ElementType::QUAD4}, {{1, 2, 3, 4}});
}

/// Structured quad/triangle surface z = 0 of nx x ny cells on [0,1]^2.
Mesh grid(int nx, int ny, bool triangles) {
  std::vector<Eigen::RowVector3d> pts;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) pts.emplace_back(double(i) / nx, double(j) / ny, 0.0);
  std::vector<ElementType> types;
  std::vector<std::vector<std::uint32_t>> cells;
  auto id = [&](int i, int j) { return static_cast<std::uint32_t>(j * (nx + 1) + i + 1); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (triangles) {
        cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        types.insert(types.end(), 2, ElementType::TRIA3);
      } else {
        cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        types.push_back(ElementType::QUAD4);
      }
    }
  return from_cells(pts, types, cells);
}

double element_measure(const Mesh& mesh, Index e) {
  // Signed volume by tetrahedral decomposition around the element centroid
  // using the standard face lists; positive means outward-facing faces.
  const auto n = mesh.element_nodes(e);
  auto p = [&](int i) -> Eigen::Vector3d { return mesh.coordinates().row(n[static_cast<std::size_t>(i)] - 1).transpose(); };
  std::vector<std::vector<int>> faces;
  switch (mesh.element_types()[e]) {
    case ElementType::HEXA8: faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}}; break;
    case ElementType::WEDGE6: faces = {{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}}; break;
    case ElementType::PYRA5: faces = {{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}}; break;
    case ElementType::TET4: faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}}; break;
    default: return 0.0;
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n.size(); ++i) c += p(static_cast<int>(i));
  c /= static_cast<double>(n.size());
  double v = 0.0;
  for (const auto& f : faces) {
    Eigen::Vector3d fc = Eigen::Vector3d::Zero();
    for (int i : f) fc += p(i);
    fc /= static_cast<double>(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Eigen::Vector3d a = p(f[i]), b = p(f[(i + 1) % f.size()]);
      v += (a - c).cross(b - c).dot(fc - c) / 6.0;
    }
  }
  return v;
}

}  // namespace

TEST(Rotation, EulerConventionAndInverse) {
  const Eigen::Matrix3d rz = euler_rotation(0.0, 0.0, kPi / 2);
  EXPECT_TRUE((rz * Eigen::Vector3d::UnitX()).isApprox(Eigen::Vector3d::UnitY(), 1e-15));
  const Eigen::Matrix3d rx = euler_rotation(kPi / 2, 0.0, 0.0);
  EXPECT_TRUE((rx * Eigen::Vector3d::UnitY()).isApprox(Eigen::Vector3d::UnitZ(), 1e-15));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d angles(u(rng), u(rng), u(rng));
    const Eigen::Matrix3d r = euler_rotation(angles.x(), angles.y(), angles.z());
    EXPECT_LE((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    // Intrinsic Z-Y'-X'': rotate about z, then the rotated y, then the twice rotated x.
    const Eigen::Matrix3d r1 = Eigen::AngleAxisd(angles.z(), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    const Eigen::Matrix3d r2 = Eigen::AngleAxisd(angles.y(), r1.col(1)).toRotationMatrix() * r1;
    const Eigen::Matrix3d r3 = Eigen::AngleAxisd(angles.x(), r2.col(0)).toRotationMatrix() * r2;
    EXPECT_LE((r3 - r).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((euler_angles_from_rotation(r) - angles).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Extrude, QuadToHexa) {
  const Mesh out = extrude_mesh_region(unit_quad(), "base", {{0, 0, 1}});
  EXPECT_EQ(out.num_nodes(), 8);
  ASSERT_EQ(out.num_elements(), 1);
  EXPECT_EQ(out.element_types()[0], ElementType::HEXA8);
  EXPECT_NEAR(element_measure(out, 0), 1.0, 1e-12);
  EXPECT_EQ(out.regions().front().name, "base");
}

TEST(Extrude, CountingIdentitiesAndOrientation) {
  for (bool tri : {false, true}) {
    const Mesh base = grid(3, 2, tri);
    const std::vector<Eigen::Vector3d> path{{0, 0, 0.5}, {0.1, 0, 0.5}, {0, 0, -2.0}};
    const Mesh out = extrude_mesh_region(base, "base", path);
    EXPECT_EQ(out.num_elements(), base.num_elements() * 3);
    EXPECT_EQ(out.num_nodes(), base.num_nodes() * 4);
    double total = 0.0;
    for (Index e = 0; e < out.num_elements(); ++e) {
      EXPECT_EQ(out.element_types()[e], tri ? ElementType::WEDGE6 : ElementType::HEXA8);
      const double v = element_measure(out, e);
      EXPECT_GT(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 3.0, 1e-12);  // unit area times |dz| = 0.5 + 0.5 + 2
    EXPECT_EQ(out.info().dimension, 3);
  }
}

TEST(Extrude, LinesGiveQuads) {
  const Mesh line = from_cells({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {ElementType::LINE2, ElementType::LINE2}, {{1, 2}, {2, 3}});
  const Mesh out = extrude_mesh_region(line, "base", {{0, 1, 0}, {0, 1, 0}});
  EXPECT_EQ(out.num_elements(), 4);
  EXPECT_EQ(out.num_nodes(), 9);
  for (auto t : out.element_types()) EXPECT_EQ(t, ElementType::QUAD4);
}

TEST(Extrude, Errors) {
  EXPECT_THROW(extrude_mesh_region(unit_quad(), "base", {}), ValidationError);
  EXPECT_THROW(extrude_mesh_region(unit_quad(), "base", {{0, 0, 1}, {0, 0, -1}}), ValidationError);
  EXPECT_THROW(extrude_mesh_region(unit_quad(), "base", {{0, 0, 0}}), ValidationError);
  EXPECT_THROW(extrude_mesh_region(unit_quad(), "base", {{1, 0, 0}}), ValidationError);  // in-plane
  const Mesh tet = from_cells({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {ElementType::TET4}, {{1, 2, 3, 4}});
  EXPECT_THROW(extrude_mesh_region(tet, "base", {{0, 0, 1}}), ValidationError);
}

TEST(Revolve, FullTurnClosesRing) {
  const Mesh seg = from_cells({{1, 0, 0}, {2, 0, 0}}, {ElementType::LINE2}, {{1, 2}});
  const Mesh ring = revolve_mesh_region(seg, "base", Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), 2 * kPi, 4);
  EXPECT_EQ(ring.num_nodes(), 8);
  EXPECT_EQ(ring.num_elements(), 4);
  // The last element closes onto the first layer.
  const auto last = ring.element_nodes(3);
  EXPECT_TRUE(std::find(last.begin(), last.end(), 1u) != last.end());
  EXPECT_TRUE(std::find(last.begin(), last.end(), 2u) != last.end());
}

TEST(Revolve, QuadQuarterTurnIsOneHexa) {
  const Mesh quad = from_cells({{1, 0, 0}, {2, 0, 0}, {2, 0, 1}, {1, 0, 1}}, {ElementType::QUAD4}, {{1, 2, 3, 4}});
  const Mesh out = revolve_mesh_region(quad, "base", Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), kPi / 2, 1);
  ASSERT_EQ(out.num_elements(), 1);
  EXPECT_EQ(out.element_types()[0], ElementType::HEXA8);
  EXPECT_EQ(out.num_nodes(), 8);
  EXPECT_GT(element_measure(out, 0), 0.0);
}

TEST(Revolve, PreservesAxisDistance) {
  std::mt19937 rng(5);
  const Mesh base = grid(4, 3, true);
  const Eigen::Vector3d point(-0.5, 0.2, 0.1), dir(0.3, 1.0, 0.2);
  const Mesh out = revolve_mesh_region(base, "base", point, dir, 1.3, 5);
  const Eigen::Vector3d axis = dir.normalized();
  auto radius = [&](const Eigen::Vector3d& x) {
    const Eigen::Vector3d d = x - point;
    return (d - d.dot(axis) * axis).norm();
  };
  const Index nb = base.num_nodes();
  for (Index i = 0; i < out.num_nodes(); ++i) {
    const Eigen::Vector3d x = out.coordinates().row(i).transpose();
    const Eigen::Vector3d x0 = base.coordinates().row(i % nb).transpose();
    EXPECT_NEAR(radius(x), radius(x0), 1e-12);
  }
  for (Index e = 0; e < out.num_elements(); ++e) EXPECT_GT(element_measure(out, e), 0.0);
  EXPECT_EQ(out.num_elements(), base.num_elements() * 5);
}

TEST(Revolve, AxisNodesAreSharedAndCollapse) {
  // Quad with its left edge on the z axis, triangle with one axis node,
  // triangle with an axis edge, line with one axis node.
  const Mesh base = from_cells({{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}, {0, 0, 2}, {1, 0, 2}},
                               {ElementType::QUAD4, ElementType::TRIA3, ElementType::TRIA3},
                               {{1, 2, 3, 4}, {4, 3, 6}, {4, 6, 5}});
  const Mesh out = revolve_mesh_region(base, "base", Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), 2 * kPi, 8);
  // 3 axis nodes shared; 3 off-axis nodes in 8 layers (closed).
  EXPECT_EQ(out.num_nodes(), 3 + 3 * 8);
  std::map<ElementType, int> counts;
  for (auto t : out.element_types()) ++counts[t];
  EXPECT_EQ(counts[ElementType::WEDGE6], 8);
  EXPECT_EQ(counts[ElementType::PYRA5], 8);
  EXPECT_EQ(counts[ElementType::TET4], 8);
  double volume = 0.0;
  for (Index e = 0; e < out.num_elements(); ++e) {
    const double v = element_measure(out, e);
    EXPECT_GT(v, 0.0);
    volume += v;
  }
  EXPECT_GT(volume, 0.0);

  const Mesh line = from_cells({{0, 0, 0}, {1, 0, 0}}, {ElementType::LINE2}, {{1, 2}});
  const Mesh disc = revolve_mesh_region(line, "base", Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), 2 * kPi, 6);
  EXPECT_EQ(disc.num_nodes(), 7);
  for (auto t : disc.element_types()) EXPECT_EQ(t, ElementType::TRIA3);

  const Mesh tri = from_cells({{0, 0, 0}, {0, 0, 1}, {1, 0, 0}}, {ElementType::TRIA3}, {{1, 2, 3}});
  const Mesh cone = revolve_mesh_region(tri, "base", Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), kPi, 4);
  for (Index e = 0; e < cone.num_elements(); ++e) {
    EXPECT_EQ(cone.element_types()[e], ElementType::TET4);
    EXPECT_GT(element_measure(cone, e), 0.0);
  }
}

TEST(Revolve, Errors) {
  const Mesh on_axis = from_cells({{0, 0, 0}, {0, 0, 1}}, {ElementType::LINE2}, {{1, 2}});
  const Eigen::Vector3d o = Eigen::Vector3d::Zero(), z = Eigen::Vector3d::UnitZ();
  EXPECT_THROW(revolve_mesh_region(on_axis, "base", o, z, kPi, 4), ValidationError);
  const Mesh corner = from_cells({{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0.5, 0, 1}}, {ElementType::QUAD4}, {{1, 2, 3, 4}});
  EXPECT_THROW(revolve_mesh_region(corner, "base", o, z, kPi, 4), ValidationError);
  EXPECT_THROW(revolve_mesh_region(unit_quad(), "base", o, z, 0.0, 4), ValidationError);
  EXPECT_THROW(revolve_mesh_region(unit_quad(), "base", o, z, 2 * kPi, 2), ValidationError);
  EXPECT_THROW(revolve_mesh_region(unit_quad(), "base", o, Eigen::Vector3d::Zero(), 1.0, 2), ValidationError);
}

TEST(TransformMeshData, QuarterTurnAboutZ) {
  const Mesh mesh = from_cells({{1, 0, 0}, {0, 0, 0}}, {ElementType::LINE2}, {{1, 2}}, "r");
  ResultMeta meta{"mechDisplacement", "r", ResType::NODE, {}, AnalysisType::STATIC};
  ResultArray::Data v(1, 6);
  v << 1, 0, 0, 0, 0, 2;
  const ResultArray disp(meta, {1, 2, 3}, Eigen::VectorXd::Zero(1), v);
  RigidTransform t;
  t.euler_angles = {0, 0, kPi / 2};
  const auto out = transform_mesh_data(mesh, {"r"}, t, {disp});
  EXPECT_TRUE(out.mesh.coordinates().row(0).isApprox(Eigen::RowVector3d(0, 1, 0), 1e-15));
  EXPECT_TRUE(out.arrays[0].step_real(0).row(0).isApprox(Eigen::RowVector3d(0, 1, 0), 1e-15));
  EXPECT_TRUE(out.arrays[0].step_real(0).row(1).isApprox(Eigen::RowVector3d(0, 0, 2), 1e-15));

  const auto same = transform_mesh_data(mesh, {}, RigidTransform{}, {disp});
  EXPECT_EQ(same.mesh, mesh);
  EXPECT_EQ(same.arrays[0], disp);

  meta.dim_names = {};
  const ResultArray scalar(ResultMeta{"acouPressure", "r", ResType::NODE, {}, AnalysisType::STATIC}, {1, 2, 1},
                           Eigen::VectorXd::Zero(1), ResultArray::Data::Ones(1, 2));
  EXPECT_THROW(transform_mesh_data(mesh, {"r"}, t, {scalar}), ValidationError);
}

TEST(TransformMeshData, IsometryOnRandomData) {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-3, 3);
  const Mesh mesh = fixtures::random_mesh(rng, 120, 60);
  ResultMeta meta{"mechVelocity", mesh.regions().front().name, ResType::NODE, {}, AnalysisType::HARMONIC};
  const Index m = static_cast<Index>(mesh.regions().front().node_ids.size());
  const ResultArray vel(meta, {3, m, 3}, Eigen::Vector3d(1, 2, 3), ResultArray::Data::Random(3, m * 3),
                        ResultArray::Data::Random(3, m * 3));
  RigidTransform t{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
  const auto out = transform_mesh_data(mesh, {}, t, {vel});
  const auto& a = mesh.coordinates();
  const auto& b = out.mesh.coordinates();
  for (Index i = 0; i < a.rows(); i += 7)
    for (Index j = 0; j < a.rows(); j += 5) EXPECT_NEAR((a.row(i) - a.row(j)).norm(), (b.row(i) - b.row(j)).norm(), 1e-12);
  for (Index k = 0; k < 3; ++k) {
    EXPECT_LE((vel.step_real(k).rowwise().norm() - out.arrays[0].step_real(k).rowwise().norm()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((vel.step_imag(k).rowwise().norm() - out.arrays[0].step_imag(k).rowwise().norm()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FitMesh, IdentityForACopy) {
  const Mesh mesh = registration_surface();
  const auto fit = fit_mesh(mesh, "surface", mesh, "surface");
  EXPECT_LE(fit.objective, 1e-8);
  EXPECT_LE(fit.transform.translation.norm(), 1e-4);
  EXPECT_LE(fit.transform.euler_angles.norm(), 1e-4);
}

TEST(FitMesh, RecoversTranslation) {
  const Mesh source = registration_surface();
  RigidTransform truth;
  truth.translation = {0.1, 0, 0};
  const Mesh target = transform_mesh_data(source, {}, truth).mesh;
  const auto start = std::chrono::steady_clock::now();
  const auto fit = fit_mesh(source, "surface", target, "surface");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LE((fit.transform.translation - truth.translation).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LE(fit.transform.euler_angles.cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LT(seconds, 10.0);
}

TEST(FitMesh, RecoversRotationAboutZ) {
  const Mesh source = registration_surface();
  RigidTransform truth;
  truth.euler_angles = {0, 0, 10.0 * kPi / 180.0};
  const Mesh target = transform_mesh_data(source, {}, truth).mesh;
  const auto fit = fit_mesh(source, "surface", target, "surface");
  EXPECT_NEAR(fit.transform.euler_angles.z(), truth.euler_angles.z(), 1e-3);
  EXPECT_LE(fit.transform.euler_angles.head<2>().cwiseAbs().maxCoeff(), 1e-3);
  // Fitted transform composed with the inverse of the truth is the identity on nodes.
  const Eigen::MatrixX3d fitted = fit.transform.apply(source.coordinates());
  EXPECT_LE((fitted - target.coordinates()).rowwise().norm().maxCoeff(), 1e-3);
}

TEST(FitMesh, MonitorIsNonIncreasingAndMatchesObjective) {
  const Mesh source = registration_surface();
  RigidTransform truth{{0.05, -0.02, 0.01}, {0.02, -0.03, 0.1}};
  const Mesh target = transform_mesh_data(source, {}, truth).mesh;
  std::vector<double> trace;
  FitOptions options;
  options.monitor = [&](int, double f) { trace.push_back(f); };
  const auto fit = fit_mesh(source, "surface", target, "surface", std::nullopt, options);
  ASSERT_FALSE(trace.empty());
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
  EXPECT_NEAR(fit.objective, fit_objective(source, "surface", target, "surface", fit.transform), 1e-9);
  EXPECT_LE((fit.transform.apply(source.coordinates()) - target.coordinates()).rowwise().norm().maxCoeff(), 1e-3);
}

TEST(FitMesh, Errors) {
  const Mesh source = registration_surface();
  const Mesh point = from_cells({{0, 0, 0}}, {ElementType::POINT}, {{1}}, "p");
  EXPECT_THROW(fit_mesh(source, "surface", point, "p"), ValidationError);
  EXPECT_THROW(fit_mesh(source, "missing", source, "surface"), ValidationError);
}
