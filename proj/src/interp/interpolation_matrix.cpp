#include "meshfield/interp/interpolation_matrix.hpp"

namespace meshfield::interp {

InterpolationMatrix::InterpolationMatrix(Sparse weights, DofDescriptor source,
                                         DofDescriptor target, std::vector<Index> unmatched_rows)
    : weights_(std::move(weights)),
      source_(std::move(source)),
      target_(std::move(target)),
      unmatched_(std::move(unmatched_rows)) {
  weights_.makeCompressed();
}

std::vector<Index> empty_rows(const InterpolationMatrix::Sparse& weights) {
  std::vector<Index> rows;
  for (Index r = 0; r < weights.outerSize(); ++r) {
    bool any = false;
    for (InterpolationMatrix::Sparse::InnerIterator it(weights, r); it; ++it) {
      if (it.value() != 0.0) {
        any = true;
        break;
      }
    }
    if (!any) rows.push_back(r);
  }
  return rows;
}

InterpolationMatrix operator*(const InterpolationMatrix& outer, const InterpolationMatrix& inner) {
  if (outer.cols() != inner.rows()) {
    throw ValidationError("cannot compose operators: " + std::to_string(outer.cols()) +
                          " source DOFs vs " + std::to_string(inner.rows()) + " target DOFs");
  }
  InterpolationMatrix::Sparse product = outer.weights() * inner.weights();
  auto unmatched = empty_rows(product);
  return {std::move(product), inner.source(), outer.target(), std::move(unmatched)};
}

ResultArray apply(const InterpolationMatrix& op, const ResultArray& values) {
  if (!values.is_field()) {
    throw ValidationError("interpolation needs field data; " + values.quantity() +
                          " is history data");
  }
  if (values.num_dofs() != op.cols()) {
    throw ValidationError("result " + values.quantity() + " has M=" +
                          std::to_string(values.num_dofs()) + ", operator expects " +
                          std::to_string(op.cols()));
  }
  const Index n = values.num_steps();
  const Index d = values.num_dims();
  const Index m = op.rows();
  ResultArray::Data re(n, m * d);
  ResultArray::Data im;
  if (values.is_complex()) im.resize(n, m * d);
  for (Index k = 0; k < n; ++k) {
    Eigen::Map<ResultArray::Data>(re.row(k).data(), m, d) = op.weights() * values.step_real(k);
    if (values.is_complex()) {
      Eigen::Map<ResultArray::Data>(im.row(k).data(), m, d) = op.weights() * values.step_imag(k);
    }
  }
  ResultMeta meta = values.meta();
  if (!op.target().region.empty()) meta.region = op.target().region;
  meta.res_type = op.target().res_type;
  meta.is_complex = values.is_complex();
  return ResultArray(std::move(meta), {n, m, d}, values.step_values(), std::move(re), std::move(im));
}

}  // namespace meshfield::interp
