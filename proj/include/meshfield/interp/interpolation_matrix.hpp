#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "meshfield/core/error.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::interp {

/// Which DOFs a side of an operator addresses.
struct DofDescriptor {
  std::string region;
  ResType res_type = ResType::NODE;

  bool operator==(const DofDescriptor&) const = default;
};

/// Sparse linear map from source DOF values to target DOF values. Built once,
/// applied to every step.
class InterpolationMatrix {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  InterpolationMatrix() = default;
  InterpolationMatrix(Sparse weights, DofDescriptor source, DofDescriptor target,
                      std::vector<Index> unmatched_rows = {});

  const Sparse& weights() const { return weights_; }
  Index rows() const { return weights_.rows(); }
  Index cols() const { return weights_.cols(); }
  const DofDescriptor& source() const { return source_; }
  const DofDescriptor& target() const { return target_; }
  /// Target rows that received no contribution (all-zero rows).
  const std::vector<Index>& unmatched_rows() const { return unmatched_; }

 private:
  Sparse weights_;
  DofDescriptor source_;
  DofDescriptor target_;
  std::vector<Index> unmatched_;
};

/// `outer` after `inner`: maps inner's source to outer's target.
InterpolationMatrix operator*(const InterpolationMatrix& outer, const InterpolationMatrix& inner);

/// Row indices whose weights are all zero.
std::vector<Index> empty_rows(const InterpolationMatrix::Sparse& weights);

/// Applies the operator to a dense [source_dofs x k] block.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply(
    const InterpolationMatrix& op, const Eigen::MatrixBase<Derived>& values) {
  if (values.rows() != op.cols()) {
    throw ValidationError("interpolation operator expects " + std::to_string(op.cols()) +
                          " source rows, got " + std::to_string(values.rows()));
  }
  return op.weights().template cast<typename Derived::Scalar>() * values.derived();
}

/// Applies the operator to every step and dimension of a field result. The
/// output carries the input metadata with the target region and ResType.
ResultArray apply(const InterpolationMatrix& op, const ResultArray& values);

}  // namespace meshfield::interp
