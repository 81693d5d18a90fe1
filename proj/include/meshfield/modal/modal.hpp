#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "meshfield/core/error.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::modal {

namespace detail {

template <typename Derived>
void check_columns(const Eigen::MatrixBase<Derived>& modes, const char* what) {
  for (Eigen::Index j = 0; j < modes.cols(); ++j) {
    if (!(modes.col(j).norm() > 1e-300)) {
      throw ValidationError(std::string(what) + ": mode " + std::to_string(j) + " has zero norm");
    }
  }
}

template <typename A, typename B>
void check_pair(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const char* what) {
  if (a.rows() != b.rows()) {
    throw ValidationError(std::string(what) + ": mode sets have " + std::to_string(a.rows()) + " and " +
                          std::to_string(b.rows()) + " DOFs");
  }
  check_columns(a, what);
  check_columns(b, what);
}

}  // namespace detail

/// Mode shapes as columns of a complex [num_dof x num_modes] matrix.
struct ModeSet {
  Eigen::MatrixXcd shapes;
  std::vector<std::string> labels;

  ModeSet() = default;
  explicit ModeSet(Eigen::MatrixXcd shapes, std::vector<std::string> labels = {});

  Eigen::Index num_dofs() const { return shapes.rows(); }
  Eigen::Index num_modes() const { return shapes.cols(); }
};

/// One mode per step of a field result; DOFs are the flattened M x D values
/// and labels the step values.
ModeSet mode_set_from_result(const ResultArray& values);

/// Modal Assurance Criterion, MAC_ij = |a_i^H b_j|^2 / ((a_i^H a_i)(b_j^H b_j)).
template <typename A, typename B>
Eigen::MatrixXd mac(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  detail::check_pair(a, b, "MAC");
  const auto ac = a.template cast<std::complex<double>>().eval();
  const auto bc = b.template cast<std::complex<double>>().eval();
  const Eigen::MatrixXcd cross = ac.adjoint() * bc;
  const Eigen::VectorXd na = ac.colwise().squaredNorm().transpose();
  const Eigen::VectorXd nb = bc.colwise().squaredNorm().transpose();
  return (cross.cwiseAbs2().array().colwise() / na.array()).rowwise() / nb.transpose().array();
}

/// Modal Scale Factor of a relative to the reference b,
/// MSF_ij = (b_j^H a_i) / (b_j^H b_j), so msf(2 phi, phi) = 2.
template <typename A, typename B>
Eigen::MatrixXcd msf(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  detail::check_pair(a, b, "MSF");
  const auto ac = a.template cast<std::complex<double>>().eval();
  const auto bc = b.template cast<std::complex<double>>().eval();
  const Eigen::MatrixXcd cross = (bc.adjoint() * ac).transpose();  // [na x nb]
  const Eigen::RowVectorXd nb = bc.colwise().squaredNorm();
  return cross.array().rowwise() / nb.array().template cast<std::complex<double>>();
}

/// Modal Complexity Factor per mode, 2 l_min / (l_max + l_min) from the
/// eigenvalues of the 2x2 covariance [Re.Re, Re.Im; Im.Re, Im.Im]. 0 for modes
/// that are real up to a global phase, 1 for maximally complex modes.
template <typename A>
Eigen::VectorXd mcf(const Eigen::MatrixBase<A>& a) {
  detail::check_columns(a, "MCF");
  const auto ac = a.template cast<std::complex<double>>().eval();
  Eigen::VectorXd out(ac.cols());
  for (Eigen::Index j = 0; j < ac.cols(); ++j) {
    const Eigen::VectorXd re = ac.col(j).real();
    const Eigen::VectorXd im = ac.col(j).imag();
    Eigen::Matrix2d cov;
    cov << re.squaredNorm(), re.dot(im), re.dot(im), im.squaredNorm();
    const Eigen::Vector2d lambda = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(cov, Eigen::EigenvaluesOnly).eigenvalues();
    out(j) = 2.0 * std::max(lambda(0), 0.0) / (lambda(0) + lambda(1));
  }
  return out;
}

inline Eigen::MatrixXd mac(const ModeSet& a, const ModeSet& b) { return mac(a.shapes, b.shapes); }
inline Eigen::MatrixXcd msf(const ModeSet& a, const ModeSet& b) { return msf(a.shapes, b.shapes); }
inline Eigen::VectorXd mcf(const ModeSet& a) { return mcf(a.shapes); }

}  // namespace meshfield::modal
