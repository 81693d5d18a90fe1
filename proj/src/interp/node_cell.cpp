#include "meshfield/interp/node_cell.hpp"

#include "meshfield/core/error.hpp"
#include "meshfield/core/log.hpp"

namespace meshfield::interp {
namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<Index> local_node_index(const Mesh& mesh, const Region& region) {
  std::vector<Index> local(static_cast<std::size_t>(mesh.num_nodes()) + 1, -1);
  for (std::size_t i = 0; i < region.node_ids.size(); ++i) {
    local[region.node_ids[i]] = static_cast<Index>(i);
  }
  return local;
}

Index checked_local(const std::vector<Index>& local, std::uint32_t node, const Region& region) {
  const Index i = local[node];
  if (i < 0) {
    throw ValidationError("region " + region.name + ": element node " + std::to_string(node) +
                          " is not a region node");
  }
  return i;
}

}  // namespace

InterpolationMatrix node2cell_matrix(const Mesh& mesh, std::string_view region_name) {
  const Region& region = mesh.region(region_name);
  const auto local = local_node_index(mesh, region);
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < region.element_ids.size(); ++k) {
    const auto nodes = mesh.element_nodes(region.element_ids[k] - 1);
    const double w = 1.0 / static_cast<double>(nodes.size());
    for (auto n : nodes) entries.emplace_back(static_cast<Index>(k), checked_local(local, n, region), w);
  }
  InterpolationMatrix::Sparse weights(static_cast<Index>(region.element_ids.size()),
                                      static_cast<Index>(region.node_ids.size()));
  weights.setFromTriplets(entries.begin(), entries.end());
  return {std::move(weights), {region.name, ResType::NODE}, {region.name, ResType::ELEMENT}};
}

InterpolationMatrix cell2node_matrix(const Mesh& mesh, std::string_view region_name) {
  const Region& region = mesh.region(region_name);
  const auto local = local_node_index(mesh, region);
  std::vector<Index> adjacent(region.node_ids.size(), 0);
  std::vector<std::pair<Index, Index>> pairs;  // (node, element)
  for (std::size_t k = 0; k < region.element_ids.size(); ++k) {
    for (auto n : mesh.element_nodes(region.element_ids[k] - 1)) {
      const Index i = checked_local(local, n, region);
      ++adjacent[static_cast<std::size_t>(i)];
      pairs.emplace_back(i, static_cast<Index>(k));
    }
  }
  std::vector<Triplet> entries;
  entries.reserve(pairs.size());
  for (auto [i, k] : pairs) {
    entries.emplace_back(i, k, 1.0 / static_cast<double>(adjacent[static_cast<std::size_t>(i)]));
  }
  std::vector<Index> unmatched;
  for (std::size_t i = 0; i < adjacent.size(); ++i) {
    if (adjacent[i] == 0) {
      unmatched.push_back(static_cast<Index>(i));
      log_warning("node " + std::to_string(region.node_ids[i]) + " of region " + region.name +
                  " has no adjacent element");
    }
  }
  InterpolationMatrix::Sparse weights(static_cast<Index>(region.node_ids.size()),
                                      static_cast<Index>(region.element_ids.size()));
  weights.setFromTriplets(entries.begin(), entries.end());
  return {std::move(weights), {region.name, ResType::ELEMENT}, {region.name, ResType::NODE},
          std::move(unmatched)};
}

ResultArray node2cell(const Mesh& mesh, std::string_view region, const ResultArray& values) {
  if (values.res_type() != ResType::NODE) {
    throw ValidationError("node2cell expects nodal data, got " + std::string(to_string(values.res_type())));
  }
  return apply(node2cell_matrix(mesh, region), values);
}

ResultArray cell2node(const Mesh& mesh, std::string_view region, const ResultArray& values) {
  if (values.res_type() != ResType::ELEMENT) {
    throw ValidationError("cell2node expects element data, got " + std::string(to_string(values.res_type())));
  }
  return apply(cell2node_matrix(mesh, region), values);
}

}  // namespace meshfield::interp
