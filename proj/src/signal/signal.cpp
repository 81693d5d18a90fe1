#include "meshfield/signal/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace meshfield::signal {
namespace {

constexpr double kUniformTolerance = 1e-9;

void require_transient(const ResultArray& values, const char* what) {
  if (values.analysis_type() != AnalysisType::TRANSIENT) {
    throw ValidationError(std::string(what) + " needs transient data, " + values.quantity() + " is " +
                          std::string(to_string(values.analysis_type())));
  }
}

}  // namespace

BoundaryTreatment boundary_treatment_from_string(std::string_view name) {
  if (name == "remove") return BoundaryTreatment::Remove;
  if (name == "none" || name == "None") return BoundaryTreatment::None;
  if (name == "one-sided" || name == "one_sided") return BoundaryTreatment::OneSided;
  throw ValidationError("unknown boundary treatment '" + std::string(name) +
                        "', expected remove, none or one-sided");
}

double uniform_step(const Eigen::VectorXd& steps) {
  if (steps.size() < 2) throw ValidationError("need at least 2 steps to define a step size");
  const Eigen::Index n = steps.size();
  const double dt = (steps(n - 1) - steps(0)) / static_cast<double>(n - 1);
  if (!(dt > 0)) throw ValidationError("step values must be strictly increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs(steps(i) - steps(i - 1) - dt) > kUniformTolerance * dt) {
      throw ValidationError("step values are not uniformly spaced (step " + std::to_string(i) + ")");
    }
  }
  return dt;
}

ResultArray time_derivative(const ResultArray& values, BoundaryTreatment boundary) {
  require_transient(values, "time derivative");
  const Eigen::Index n = values.num_steps();
  if (n < 5) throw ValidationError("time derivative needs at least 5 steps, got " + std::to_string(n));
  const double dt = uniform_step(values.step_values());

  ResultArray::Data re = differentiate(values.real(), dt, boundary);
  ResultArray::Data im;
  if (values.is_complex()) im = differentiate(values.imag(), dt, boundary);

  ResultMeta meta = values.meta();
  meta.quantity += "_dt";
  meta.is_complex = values.is_complex();
  meta.untreated_steps.clear();
  Eigen::VectorXd steps = values.step_values();
  if (boundary == BoundaryTreatment::Remove) {
    steps = values.step_values().segment(2, n - 4);
  } else if (boundary == BoundaryTreatment::None) {
    meta.untreated_steps = {0, 1, n - 2, n - 1};
  }
  std::vector<Index> shape = values.shape();
  shape[0] = re.rows();
  return ResultArray(std::move(meta), std::move(shape), std::move(steps), std::move(re), std::move(im));
}

Eigen::VectorXd fft_frequencies(Eigen::Index num_steps, double dt) {
  const Eigen::Index bins = num_steps / 2 + 1;
  return Eigen::VectorXd::LinSpaced(bins, 0.0, static_cast<double>(bins - 1)) / (static_cast<double>(num_steps) * dt);
}

Eigen::MatrixXcd one_sided_spectrum(const Eigen::MatrixXd& q, const FftOptions& options) {
  const Eigen::Index n = q.rows();
  if (n < 2) throw ValidationError("FFT needs at least 2 steps, got " + std::to_string(n));
  const Eigen::Index bins = n / 2 + 1;

  Eigen::VectorXd window = Eigen::VectorXd::Ones(n);
  if (options.hann_window) {
    for (Eigen::Index i = 0; i < n; ++i) {
      window(i) = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    }
    window /= window.mean();
  }

  Eigen::MatrixXcd out(bins, q.cols());
#pragma omp parallel
  {
    Eigen::FFT<double> fft;
    std::vector<double> column(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> spectrum;
#pragma omp for schedule(static)
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = q(i, c) * window(i);
      fft.fwd(spectrum, column);
      out(0, c) = spectrum[0] / static_cast<double>(n);
      for (Eigen::Index k = 1; k < bins; ++k) out(k, c) = spectrum[static_cast<std::size_t>(k)] * (2.0 / static_cast<double>(n));
    }
  }
  return out;
}

ResultArray field_fft(const ResultArray& values, const FftOptions& options) {
  require_transient(values, "FFT");
  if (values.is_complex()) throw ValidationError("FFT needs real input, " + values.quantity() + " is complex");
  const Eigen::Index n = values.num_steps();
  if (n < 2) throw ValidationError("FFT needs at least 2 steps, got " + std::to_string(n));
  const double dt = uniform_step(values.step_values());

  const Eigen::MatrixXcd spectrum = one_sided_spectrum(values.real(), options);
  ResultMeta meta = values.meta();
  meta.analysis_type = AnalysisType::HARMONIC;
  meta.is_complex = true;
  meta.untreated_steps.clear();
  std::vector<Index> shape = values.shape();
  shape[0] = spectrum.rows();
  ResultArray::Data re = spectrum.real();
  ResultArray::Data im = spectrum.imag();
  return ResultArray(std::move(meta), std::move(shape), fft_frequencies(n, dt), std::move(re), std::move(im));
}

}  // namespace meshfield::signal
