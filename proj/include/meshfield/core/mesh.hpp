#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "meshfield/core/element_type.hpp"

namespace meshfield {

using Index = Eigen::Index;

/// Node coordinates, one row per node (x, y, z).
using Coordinates = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// 1-based node ids, one row per element, zero-padded to the widest element.
using Connectivity =
    Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sorted, 1-based node or element ids.
using IdArray = std::vector<std::uint32_t>;

/// Named subset of a mesh.
struct Region {
  std::string name;
  int dimension = 0;
  IdArray node_ids;
  IdArray element_ids;
  bool is_group = false;

  bool operator==(const Region&) const = default;
};

struct MeshInfo {
  Index num_nodes = 0;
  Index num_elements = 0;
  int dimension = 2;
  std::map<ElementType, Index> type_counts;

  bool operator==(const MeshInfo&) const = default;
};

/// Derives MeshInfo from element types and node count. The dimension is the
/// largest element dimension, but never less than 2.
MeshInfo compute_mesh_info(std::span<const ElementType> types, Index num_nodes);

/// Unstructured mixed-element mesh with named regions.
///
/// All constructors and mutators validate the connectivity and region
/// invariants and keep `info()` in sync with the stored arrays.
class Mesh {
 public:
  Mesh() = default;
  Mesh(Coordinates coordinates, std::vector<ElementType> types, Connectivity connectivity,
       std::vector<Region> regions = {});

  const Coordinates& coordinates() const { return coordinates_; }
  const std::vector<ElementType>& element_types() const { return types_; }
  const Connectivity& connectivity() const { return connectivity_; }
  const std::vector<Region>& regions() const { return regions_; }
  const MeshInfo& info() const { return info_; }

  Index num_nodes() const { return coordinates_.rows(); }
  Index num_elements() const { return static_cast<Index>(types_.size()); }

  /// Node ids (1-based) of element `element` (0-based row index).
  std::span<const std::uint32_t> element_nodes(Index element) const;

  bool has_region(std::string_view name) const;
  /// Throws ValidationError naming the region if absent.
  const Region& region(std::string_view name) const;

  /// Replaces coordinates; the node count must not change.
  void set_coordinates(Coordinates coordinates);
  void add_region(Region region);
  void remove_region(std::string_view name);

  bool operator==(const Mesh& other) const;

 private:
  void validate_connectivity() const;
  void validate_region(const Region& region) const;

  Coordinates coordinates_ = Coordinates(0, 3);
  std::vector<ElementType> types_;
  Connectivity connectivity_ = Connectivity(0, 0);
  std::vector<Region> regions_;
  MeshInfo info_;
};

/// Builds a region from element ids; the node set is the union of the
/// element nodes and the dimension is the largest element dimension.
Region region_from_elements(const Mesh& mesh, std::string name, IdArray element_ids);

/// Region covering every node and element of `mesh`.
Region whole_mesh_region(const Mesh& mesh, std::string name);

}  // namespace meshfield
