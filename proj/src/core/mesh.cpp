#include "meshfield/core/mesh.hpp"

#include <algorithm>
#include <set>

#include "meshfield/core/error.hpp"

namespace meshfield {
namespace {

bool strictly_increasing(const IdArray& ids) {
  return std::adjacent_find(ids.begin(), ids.end(),
                            [](auto a, auto b) { return a >= b; }) == ids.end();
}

}  // namespace

MeshInfo compute_mesh_info(std::span<const ElementType> types, Index num_nodes) {
  MeshInfo info;
  info.num_nodes = num_nodes;
  info.num_elements = static_cast<Index>(types.size());
  int dim = 0;
  for (auto t : types) {
    ++info.type_counts[t];
    dim = std::max(dim, dimension(t));
  }
  info.dimension = std::max(dim, 2);
  return info;
}

Mesh::Mesh(Coordinates coordinates, std::vector<ElementType> types, Connectivity connectivity,
           std::vector<Region> regions)
    : coordinates_(std::move(coordinates)),
      types_(std::move(types)),
      connectivity_(std::move(connectivity)) {
  if (connectivity_.rows() == 0 && types_.empty()) connectivity_.resize(0, connectivity_.cols());
  validate_connectivity();
  info_ = compute_mesh_info(types_, num_nodes());
  for (auto& r : regions) add_region(std::move(r));
}

void Mesh::validate_connectivity() const {
  if (connectivity_.rows() != num_elements()) {
    throw ValidationError("connectivity has " + std::to_string(connectivity_.rows()) +
                          " rows but there are " + std::to_string(num_elements()) +
                          " element types");
  }
  const auto max_id = static_cast<std::uint64_t>(num_nodes());
  for (Index e = 0; e < num_elements(); ++e) {
    const int n = node_count(types_[e]);
    if (types_[e] == ElementType::UNDEF) {
      throw ValidationError("element " + std::to_string(e + 1) + " has type UNDEF");
    }
    if (n > connectivity_.cols()) {
      throw ValidationError("element " + std::to_string(e + 1) + " of type " +
                            std::string(to_string(types_[e])) + " needs " + std::to_string(n) +
                            " connectivity columns, have " + std::to_string(connectivity_.cols()));
    }
    for (Index c = 0; c < connectivity_.cols(); ++c) {
      const std::uint64_t id = connectivity_(e, c);
      if (c < n) {
        if (id == 0 || id > max_id) {
          throw ValidationError("element " + std::to_string(e + 1) + " references node id " +
                                std::to_string(id) + " outside [1, " + std::to_string(max_id) +
                                "]");
        }
      } else if (id != 0) {
        throw ValidationError("element " + std::to_string(e + 1) +
                              " has a non-zero entry beyond its node count");
      }
    }
  }
}

void Mesh::validate_region(const Region& region) const {
  if (region.name.empty()) throw ValidationError("region name must not be empty");
  if (has_region(region.name)) throw ValidationError("duplicate region name: " + region.name);
  if (!strictly_increasing(region.node_ids) || !strictly_increasing(region.element_ids)) {
    throw ValidationError("region " + region.name + ": ids must be strictly increasing");
  }
  if (!region.node_ids.empty() &&
      (region.node_ids.front() == 0 || region.node_ids.back() > num_nodes())) {
    throw ValidationError("region " + region.name + ": node id out of range");
  }
  if (!region.element_ids.empty() &&
      (region.element_ids.front() == 0 || region.element_ids.back() > num_elements())) {
    throw ValidationError("region " + region.name + ": element id out of range");
  }
}

std::span<const std::uint32_t> Mesh::element_nodes(Index element) const {
  return {connectivity_.data() + element * connectivity_.cols(),
          static_cast<std::size_t>(node_count(types_[element]))};
}

bool Mesh::has_region(std::string_view name) const {
  return std::any_of(regions_.begin(), regions_.end(),
                     [&](const Region& r) { return r.name == name; });
}

const Region& Mesh::region(std::string_view name) const {
  for (const auto& r : regions_) {
    if (r.name == name) return r;
  }
  throw ValidationError("unknown region: " + std::string(name));
}

void Mesh::set_coordinates(Coordinates coordinates) {
  if (coordinates.rows() != num_nodes()) {
    throw ValidationError("set_coordinates: node count must stay " + std::to_string(num_nodes()));
  }
  coordinates_ = std::move(coordinates);
  info_ = compute_mesh_info(types_, num_nodes());
}

void Mesh::add_region(Region region) {
  validate_region(region);
  regions_.push_back(std::move(region));
  info_ = compute_mesh_info(types_, num_nodes());
}

void Mesh::remove_region(std::string_view name) {
  auto it = std::find_if(regions_.begin(), regions_.end(),
                         [&](const Region& r) { return r.name == name; });
  if (it == regions_.end()) throw ValidationError("unknown region: " + std::string(name));
  regions_.erase(it);
  info_ = compute_mesh_info(types_, num_nodes());
}

bool Mesh::operator==(const Mesh& other) const {
  return coordinates_.rows() == other.coordinates_.rows() &&
         (coordinates_.array() == other.coordinates_.array()).all() &&
         types_ == other.types_ && connectivity_.rows() == other.connectivity_.rows() &&
         connectivity_.cols() == other.connectivity_.cols() &&
         (connectivity_.array() == other.connectivity_.array()).all() &&
         regions_ == other.regions_ && info_ == other.info_;
}

Region region_from_elements(const Mesh& mesh, std::string name, IdArray element_ids) {
  std::sort(element_ids.begin(), element_ids.end());
  element_ids.erase(std::unique(element_ids.begin(), element_ids.end()), element_ids.end());
  std::set<std::uint32_t> nodes;
  int dim = 0;
  for (auto id : element_ids) {
    if (id == 0 || id > mesh.num_elements()) {
      throw ValidationError("region " + name + ": element id " + std::to_string(id) +
                            " out of range");
    }
    for (auto n : mesh.element_nodes(id - 1)) nodes.insert(n);
    dim = std::max(dim, dimension(mesh.element_types()[id - 1]));
  }
  return Region{std::move(name), dim, IdArray(nodes.begin(), nodes.end()), std::move(element_ids),
                false};
}

Region whole_mesh_region(const Mesh& mesh, std::string name) {
  Region r;
  r.name = std::move(name);
  r.node_ids.resize(static_cast<std::size_t>(mesh.num_nodes()));
  r.element_ids.resize(static_cast<std::size_t>(mesh.num_elements()));
  for (std::size_t i = 0; i < r.node_ids.size(); ++i) r.node_ids[i] = static_cast<std::uint32_t>(i + 1);
  for (std::size_t i = 0; i < r.element_ids.size(); ++i) {
    r.element_ids[i] = static_cast<std::uint32_t>(i + 1);
  }
  for (auto t : mesh.element_types()) r.dimension = std::max(r.dimension, dimension(t));
  return r;
}

}  // namespace meshfield
