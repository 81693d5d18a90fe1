#include "meshfield/modal/modal.hpp"

#include <sstream>

namespace meshfield::modal {

ModeSet::ModeSet(Eigen::MatrixXcd s, std::vector<std::string> l) : shapes(std::move(s)), labels(std::move(l)) {
  detail::check_columns(shapes, "ModeSet");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != shapes.cols()) {
    throw ValidationError("ModeSet has " + std::to_string(shapes.cols()) + " modes but " +
                          std::to_string(labels.size()) + " labels");
  }
}

ModeSet mode_set_from_result(const ResultArray& values) {
  if (!values.is_field()) throw ValidationError("mode shapes need field data, " + values.quantity() + " is history data");
  Eigen::MatrixXcd shapes(values.real().cols(), values.num_steps());
  shapes.real() = values.real().transpose();
  if (values.is_complex()) {
    shapes.imag() = values.imag().transpose();
  } else {
    shapes.imag().setZero();
  }
  std::vector<std::string> labels;
  for (Eigen::Index k = 0; k < values.num_steps(); ++k) {
    std::ostringstream label;
    label << values.step_values()(k);
    labels.push_back(label.str());
  }
  return ModeSet(std::move(shapes), std::move(labels));
}

}  // namespace meshfield::modal
