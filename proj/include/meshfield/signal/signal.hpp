#pragma once

#include <string_view>

#include <Eigen/Core>

#include "meshfield/core/error.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::signal {

/// What happens at the first and last two steps, where the centred
/// five-point differentiator does not fit.
enum class BoundaryTreatment {
  Remove,    ///< drop them; the output has N - 4 steps
  None,      ///< copy the input values unchanged and list them as untreated
  OneSided,  ///< one-sided estimators
};

/// Accepts "remove", "none" and "one-sided" (also "one_sided").
BoundaryTreatment boundary_treatment_from_string(std::string_view name);

/// Step size of uniformly spaced step values (relative tolerance 1e-9).
double uniform_step(const Eigen::VectorXd& step_values);

/// Smooth noise-robust differentiator of order 5 applied to each column of
/// `q` (rows are time steps):
///
///   q'_i = (2 (q_{i+1} - q_{i-1}) + q_{i+2} - q_{i-2}) / (8 dt)
///
/// Boundary rows for OneSided: the second and second-to-last rows use the
/// three-point member of the same family, (q_{i+1} - q_{i-1}) / (2 dt); the
/// first and last rows use the five-point one-sided estimator
///
///   q'_i = (5 q_i + 2 q_{i-1} - 8 q_{i-2} - 2 q_{i-3} + 3 q_{i-4}) / (8 dt)
///
/// (mirrored with opposite sign at the start). All are exact for quadratics.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> differentiate(
    const Eigen::MatrixBase<Derived>& q, typename Derived::Scalar dt, BoundaryTreatment boundary) {
  using Scalar = typename Derived::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = q.rows();
  if (n < 5) throw ValidationError("time derivative needs at least 5 steps, got " + std::to_string(n));
  if (!(dt > Scalar(0))) throw ValidationError("time derivative needs a positive step size");

  const Scalar s = Scalar(1) / (Scalar(8) * dt);
  auto centred = [&](Eigen::Index i) {
    return (Scalar(2) * (q.row(i + 1) - q.row(i - 1)) + q.row(i + 2) - q.row(i - 2)) * s;
  };
  if (boundary == BoundaryTreatment::Remove) {
    Result out(n - 4, q.cols());
    for (Eigen::Index i = 2; i < n - 2; ++i) out.row(i - 2) = centred(i);
    return out;
  }
  Result out(n, q.cols());
  for (Eigen::Index i = 2; i < n - 2; ++i) out.row(i) = centred(i);
  if (boundary == BoundaryTreatment::None) {
    out.topRows(2) = q.topRows(2);
    out.bottomRows(2) = q.bottomRows(2);
    return out;
  }
  const Scalar h = Scalar(1) / (Scalar(2) * dt);
  out.row(1) = (q.row(2) - q.row(0)) * h;
  out.row(n - 2) = (q.row(n - 1) - q.row(n - 3)) * h;
  out.row(0) = -(Scalar(5) * q.row(0) + Scalar(2) * q.row(1) - Scalar(8) * q.row(2) - Scalar(2) * q.row(3) +
                 Scalar(3) * q.row(4)) * s;
  out.row(n - 1) = (Scalar(5) * q.row(n - 1) + Scalar(2) * q.row(n - 2) - Scalar(8) * q.row(n - 3) -
                    Scalar(2) * q.row(n - 4) + Scalar(3) * q.row(n - 5)) * s;
  return out;
}

/// Time derivative of a transient result. The quantity gets the suffix "_dt".
ResultArray time_derivative(const ResultArray& values, BoundaryTreatment boundary);

struct FftOptions {
  /// Periodic Hann window, amplitude-corrected so on-bin sinusoids keep
  /// their amplitude.
  bool hann_window = false;
};

/// One-sided amplitude spectrum of every column of `q` (rows are N time
/// steps): rows k = 0..floor(N/2), X_k = c_k sum_n q_n exp(-2 pi i k n / N)
/// with c_0 = 1/N and c_k = 2/N otherwise.
Eigen::MatrixXcd one_sided_spectrum(const Eigen::MatrixXd& q, const FftOptions& options = {});

/// Frequencies k / (N dt), k = 0..floor(N/2).
Eigen::VectorXd fft_frequencies(Eigen::Index num_steps, double dt);

/// FFT along the step axis of a real transient result. The output is a
/// complex HARMONIC result whose step values are the frequencies.
ResultArray field_fft(const ResultArray& values, const FftOptions& options = {});

}  // namespace meshfield::signal
