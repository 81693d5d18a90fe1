#include <algorithm>
#include <cmath>
#include <set>

#include "meshfield/core/error.hpp"
#include "meshfield/transforms/transforms.hpp"

namespace meshfield::transforms {

Eigen::Vector3d euler_angles_from_rotation(const Eigen::Matrix3d& r) {
  const double beta = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  if (std::abs(r(2, 0)) < 1.0 - 1e-12) {
    return {std::atan2(r(2, 1), r(2, 2)), beta, std::atan2(r(1, 0), r(0, 0))};
  }
  // Gimbal lock: only alpha -/+ gamma is determined; put it all in gamma.
  return {0.0, beta, std::atan2(-r(0, 1), r(1, 1))};
}

TransformedData transform_mesh_data(const Mesh& mesh, const std::vector<std::string>& regions,
                                    const RigidTransform& transform, const std::vector<ResultArray>& vector_arrays) {
  std::set<std::string> selected(regions.begin(), regions.end());
  for (const auto& name : selected) mesh.region(name);  // throws for unknown regions
  for (const auto& array : vector_arrays) {
    if (array.num_dims() != 3) {
      throw ValidationError("transform expects vector data (D = 3), " + array.quantity() + " has D = " +
                            std::to_string(array.num_dims()));
    }
    if (!selected.empty() && array.is_field() && !selected.count(array.region())) {
      throw ValidationError("vector result " + array.quantity() + " is defined on region " + array.region() +
                            ", which is not being transformed");
    }
  }

  const Eigen::Matrix3d rot = transform.rotation();
  Coordinates coords = mesh.coordinates();
  if (selected.empty()) {
    coords = transform.apply(coords);
  } else {
    std::vector<char> moving(static_cast<std::size_t>(mesh.num_nodes()), 0);
    for (const auto& name : selected) {
      for (auto id : mesh.region(name).node_ids) moving[id - 1] = 1;
    }
    for (Index i = 0; i < coords.rows(); ++i) {
      if (moving[static_cast<std::size_t>(i)]) {
        coords.row(i) = (rot * coords.row(i).transpose() + transform.translation).transpose();
      }
    }
  }
  Mesh moved = mesh;
  moved.set_coordinates(std::move(coords));

  std::vector<ResultArray> rotated;
  rotated.reserve(vector_arrays.size());
  for (const auto& array : vector_arrays) {
    ResultArray out = array;
    for (Index k = 0; k < out.num_steps(); ++k) {
      auto re = out.step_real_mutable(k);
      re = re * rot.transpose();
      if (out.is_complex()) {
        auto im = out.step_imag_mutable(k);
        im = im * rot.transpose();
      }
    }
    rotated.push_back(std::move(out));
  }
  return {std::move(moved), std::move(rotated)};
}

}  // namespace meshfield::transforms
