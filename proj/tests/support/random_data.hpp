#pragma once

// Seeded generators of valid meshes and results for property-style tests.

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::fixtures {

inline Mesh random_mesh(std::mt19937& rng, Index num_nodes, Index num_elements,
                        std::vector<ElementType> allowed = {}) {
  if (allowed.empty()) {
    for (auto t : kAllElementTypes) {
      if (t != ElementType::UNDEF && node_count(t) <= num_nodes) allowed.push_back(t);
    }
  }
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  Coordinates coords(num_nodes, 3);
  for (Index i = 0; i < num_nodes; ++i) {
    for (int c = 0; c < 3; ++c) coords(i, c) = coord(rng);
  }

  std::uniform_int_distribution<std::size_t> pick_type(0, allowed.size() - 1);
  std::vector<ElementType> types(static_cast<std::size_t>(num_elements));
  int width = 0;
  for (auto& t : types) {
    t = allowed[pick_type(rng)];
    width = std::max(width, node_count(t));
  }
  Connectivity conn = Connectivity::Zero(num_elements, width);
  std::vector<std::uint32_t> ids(static_cast<std::size_t>(num_nodes));
  std::iota(ids.begin(), ids.end(), 1u);
  for (Index e = 0; e < num_elements; ++e) {
    const int n = node_count(types[static_cast<std::size_t>(e)]);
    // partial Fisher-Yates for n distinct nodes
    for (int k = 0; k < n; ++k) {
      std::uniform_int_distribution<std::size_t> j(static_cast<std::size_t>(k), ids.size() - 1);
      std::swap(ids[static_cast<std::size_t>(k)], ids[j(rng)]);
      conn(e, k) = ids[static_cast<std::size_t>(k)];
    }
  }
  Mesh mesh(std::move(coords), std::move(types), std::move(conn));

  std::uniform_int_distribution<int> num_regions(1, 3);
  const int nr = num_regions(rng);
  for (int r = 0; r < nr; ++r) {
    IdArray elements;
    std::bernoulli_distribution take(0.5);
    for (Index e = 0; e < num_elements; ++e) {
      if (r == 0 || take(rng)) elements.push_back(static_cast<std::uint32_t>(e + 1));
    }
    Region region = region_from_elements(mesh, "region_" + std::to_string(r), std::move(elements));
    region.is_group = r == 2;
    mesh.add_region(std::move(region));
  }
  return mesh;
}

inline ResultArray::Data random_data(std::mt19937& rng, Index rows, Index cols) {
  std::normal_distribution<double> value(0.0, 1.0);
  ResultArray::Data d(rows, cols);
  for (Index i = 0; i < d.size(); ++i) d.data()[i] = value(rng);
  return d;
}

inline ResultContainer random_results(std::mt19937& rng, const Mesh& mesh, AnalysisType analysis,
                                      Index num_steps) {
  Eigen::VectorXd steps(num_steps);
  double t = 0.0;
  std::uniform_real_distribution<double> dt(0.01, 1.0);
  for (Index k = 0; k < num_steps; ++k) steps(k) = (t += dt(rng));

  ResultContainer container(analysis, 1);
  std::uniform_int_distribution<int> dims_choice(0, 2);
  const Index dims_table[] = {1, 3, 6};
  int counter = 0;
  for (const auto& region : mesh.regions()) {
    for (ResType rt : {ResType::NODE, ResType::ELEMENT}) {
      const Index m = rt == ResType::NODE ? static_cast<Index>(region.node_ids.size())
                                          : static_cast<Index>(region.element_ids.size());
      const Index d = dims_table[dims_choice(rng)];
      ResultMeta meta;
      meta.quantity = "q" + std::to_string(counter++);
      meta.region = region.name;
      meta.res_type = rt;
      meta.analysis_type = analysis;
      auto re = random_data(rng, num_steps, m * d);
      auto im = default_is_complex(analysis) ? random_data(rng, num_steps, m * d) : ResultArray::Data();
      container.add(ResultArray(meta, {num_steps, m, d}, steps, std::move(re), std::move(im)));
    }
  }
  ResultMeta history;
  history.quantity = "energy";
  history.region = mesh.regions().front().name;
  history.res_type = ResType::REGION;
  history.analysis_type = analysis;
  auto re = random_data(rng, num_steps, 2);
  auto im = default_is_complex(analysis) ? random_data(rng, num_steps, 2) : ResultArray::Data();
  history.dim_names = {"kinetic", "potential"};
  container.add(ResultArray(history, {num_steps, 2}, steps, std::move(re), std::move(im)));
  return container;
}

/// Unique scratch path under the system temp directory.
inline std::string temp_path(const std::string& name) {
  static std::random_device rd;
  static const auto tag = std::to_string(rd());
  return (std::filesystem::temp_directory_path() / ("meshfield_" + tag + "_" + name)).string();
}

}  // namespace meshfield::fixtures
