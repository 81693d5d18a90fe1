#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "meshfield/core/error.hpp"
#include "meshfield/signal/signal.hpp"

using namespace meshfield;
using namespace meshfield::signal;

namespace {

constexpr double kPi = std::numbers::pi;

/// Transient history result with one column per function of t.
ResultArray series(const Eigen::VectorXd& t, const std::vector<std::function<double(double)>>& fs,
                   AnalysisType analysis = AnalysisType::TRANSIENT) {
  ResultArray::Data re(t.size(), static_cast<Index>(fs.size()));
  for (Index i = 0; i < t.size(); ++i)
    for (std::size_t c = 0; c < fs.size(); ++c) re(i, static_cast<Index>(c)) = fs[c](t(i));
  ResultMeta meta{"mechDisplacement", "r", ResType::NODE, {}, analysis};
  return ResultArray(meta, {t.size(), static_cast<Index>(fs.size()), 1}, t, re);
}

Eigen::VectorXd times(Index n, double dt, double t0 = 0.0) {
  return Eigen::VectorXd::LinSpaced(n, t0, t0 + dt * static_cast<double>(n - 1));
}

}  // namespace

TEST(TimeDerivative, ExactForPolynomialsUpToDegreeTwo) {
  const Eigen::VectorXd t = times(40, 0.1, 0.3);
  const ResultArray q = series(t, {[](double) { return 3.0; }, [](double x) { return 2.0 * x - 1.0; },
                                   [](double x) { return x * x - 0.5 * x; }});
  for (auto b : {BoundaryTreatment::Remove, BoundaryTreatment::None, BoundaryTreatment::OneSided}) {
    const ResultArray d = time_derivative(q, b);
    const Index first = b == BoundaryTreatment::None ? 2 : 0;
    const Index last = b == BoundaryTreatment::None ? d.num_steps() - 2 : d.num_steps();
    for (Index k = first; k < last; ++k) {
      const double tk = d.step_values()(k);
      EXPECT_NEAR(d.real()(k, 0), 0.0, 1e-12);
      EXPECT_NEAR(d.real()(k, 1), 2.0, 2.0 * 1e-12);
      EXPECT_NEAR(d.real()(k, 2), 2.0 * tk - 0.5, std::abs(2.0 * tk - 0.5) * 1e-12 + 1e-12);
    }
  }
}

TEST(TimeDerivative, QuadraticAtOneWithStepTenth) {
  const Eigen::VectorXd t = times(21, 0.1);
  const ResultArray d = time_derivative(series(t, {[](double x) { return x * x; }}), BoundaryTreatment::None);
  EXPECT_NEAR(d.real()(10, 0), 2.0, 1e-12);
}

TEST(TimeDerivative, CubicErrorIsTwoAndAHalfStepSquared) {
  for (double dt : {0.1, 0.05, 0.01}) {
    const Eigen::VectorXd t = times(30, dt, -0.7);
    const ResultArray d = time_derivative(series(t, {[](double x) { return x * x * x; }}), BoundaryTreatment::Remove);
    for (Index k = 0; k < d.num_steps(); ++k) {
      const double tk = d.step_values()(k);
      const double error = d.real()(k, 0) - 3.0 * tk * tk;
      EXPECT_NEAR(error, 2.5 * dt * dt, 0.01 * 2.5 * dt * dt);
    }
  }
}

TEST(TimeDerivative, WhiteNoiseVarianceRatio) {
  std::mt19937 rng(2024);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Index n = 100000;
  Eigen::VectorXd q(n);
  for (Index i = 0; i < n; ++i) q(i) = noise(rng);
  const Eigen::MatrixXd d = differentiate(q, 1.0, BoundaryTreatment::Remove);
  auto variance = [](const Eigen::VectorXd& v) { return (v.array() - v.mean()).square().mean(); };
  const double ratio = variance(d.col(0)) / variance(q);
  EXPECT_NEAR(ratio, 10.0 / 64.0, 0.05 * 10.0 / 64.0);
}

TEST(TimeDerivative, Linearity) {
  std::mt19937 rng(4);
  const Eigen::MatrixXd q1 = Eigen::MatrixXd::Random(50, 6);
  const Eigen::MatrixXd q2 = Eigen::MatrixXd::Random(50, 6);
  for (auto b : {BoundaryTreatment::Remove, BoundaryTreatment::None, BoundaryTreatment::OneSided}) {
    const Eigen::MatrixXd lhs = differentiate(Eigen::MatrixXd(2.5 * q1 - 0.75 * q2), 0.01, b);
    const Eigen::MatrixXd rhs = 2.5 * differentiate(q1, 0.01, b) - 0.75 * differentiate(q2, 0.01, b);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
  }
}

TEST(TimeDerivative, BoundaryBookkeeping) {
  const Eigen::VectorXd t = times(12, 0.1, 1.0);
  const ResultArray q = series(t, {[](double x) { return std::sin(x); }});

  const ResultArray removed = time_derivative(q, BoundaryTreatment::Remove);
  EXPECT_EQ(removed.num_steps(), 8);
  EXPECT_EQ(removed.step_values(), t.segment(2, 8));
  EXPECT_EQ(removed.quantity(), "mechDisplacement_dt");
  EXPECT_TRUE(removed.meta().untreated_steps.empty());

  const ResultArray none = time_derivative(q, BoundaryTreatment::None);
  EXPECT_EQ(none.num_steps(), 12);
  EXPECT_EQ(none.meta().untreated_steps, (std::vector<Index>{0, 1, 10, 11}));
  for (Index k : {0, 1, 10, 11}) EXPECT_EQ(none.real()(k, 0), q.real()(k, 0));
  EXPECT_EQ(none.real().middleRows(2, 8), removed.real());

  const ResultArray one = time_derivative(q, BoundaryTreatment::OneSided);
  EXPECT_EQ(one.step_values(), t);
  for (Index k = 0; k < 12; ++k) EXPECT_NEAR(one.real()(k, 0), std::cos(t(k)), 0.02);
}

TEST(TimeDerivative, MinimumLengthAndComplexData) {
  const Eigen::VectorXd t = times(5, 1.0);
  ResultMeta meta{"acouPressure", "r", ResType::NODE, {}, AnalysisType::TRANSIENT, true};
  ResultArray::Data re(5, 1), im(5, 1);
  re << 0, 1, 2, 3, 4;
  im << 0, 1, 4, 9, 16;
  const ResultArray d = time_derivative(ResultArray(meta, {5, 1, 1}, t, re, im), BoundaryTreatment::OneSided);
  ASSERT_TRUE(d.is_complex());
  for (Index k = 0; k < 5; ++k) {
    EXPECT_NEAR(d.real()(k, 0), 1.0, 1e-12);
    EXPECT_NEAR(d.imag()(k, 0), 2.0 * k, 1e-12);
  }
}

TEST(TimeDerivative, Errors) {
  EXPECT_THROW(time_derivative(series(times(4, 1.0), {[](double x) { return x; }}), BoundaryTreatment::Remove),
               ValidationError);
  Eigen::VectorXd t = times(8, 1.0);
  t(5) += 0.01;
  EXPECT_THROW(time_derivative(series(t, {[](double x) { return x; }}), BoundaryTreatment::Remove), ValidationError);
  EXPECT_THROW(time_derivative(series(times(8, 1.0), {[](double x) { return x; }}, AnalysisType::STATIC),
                               BoundaryTreatment::Remove),
               ValidationError);
  EXPECT_THROW(boundary_treatment_from_string("both"), ValidationError);
  EXPECT_EQ(boundary_treatment_from_string("one-sided"), BoundaryTreatment::OneSided);
  EXPECT_EQ(boundary_treatment_from_string("remove"), BoundaryTreatment::Remove);
  EXPECT_EQ(boundary_treatment_from_string("none"), BoundaryTreatment::None);
}

TEST(FieldFft, OnBinSinusoid) {
  const Index n = 64;
  const double dt = 1.0 / 64.0;
  const double f0 = 5.0;  // bin 5
  const ResultArray q = series(times(n, dt), {[&](double x) { return std::sin(2 * kPi * f0 * x); }});
  const ResultArray s = field_fft(q);
  EXPECT_EQ(s.analysis_type(), AnalysisType::HARMONIC);
  EXPECT_TRUE(s.is_complex());
  ASSERT_EQ(s.num_steps(), 33);
  for (Index k = 0; k < s.num_steps(); ++k) {
    const double amplitude = std::abs(s.value(k, 0, 0));
    EXPECT_NEAR(s.step_values()(k), static_cast<double>(k), 1e-12);
    if (k == 5) {
      EXPECT_NEAR(amplitude, 1.0, 1e-10);
    } else {
      EXPECT_LT(amplitude, 1e-10);
    }
  }
}

TEST(FieldFft, ConstantSignalIsDc) {
  const ResultArray s = field_fft(series(times(10, 0.2), {[](double) { return 3.5; }}));
  EXPECT_NEAR(s.value(0, 0, 0).real(), 3.5, 1e-14);
  for (Index k = 1; k < s.num_steps(); ++k) EXPECT_LT(std::abs(s.value(k, 0, 0)), 1e-14);
  EXPECT_EQ(s.num_steps(), 6);
  EXPECT_NEAR(s.step_values()(5), 5.0 / (10 * 0.2), 1e-14);
}

TEST(FieldFft, ParsevalAndDirectDftOracle) {
  std::mt19937 rng(6);
  std::normal_distribution<double> noise;
  for (Index n : {64, 63, 100, 7}) {
    Eigen::MatrixXd q(n, 3);
    for (Index i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) q(i, c) = noise(rng);
    const Eigen::MatrixXcd x = one_sided_spectrum(q);
    ASSERT_EQ(x.rows(), n / 2 + 1);
    for (int c = 0; c < 3; ++c) {
      // Direct DFT with the same scaling.
      for (Index k = 0; k < x.rows(); ++k) {
        std::complex<double> sum = 0;
        for (Index i = 0; i < n; ++i) sum += q(i, c) * std::polar(1.0, -2 * kPi * double(k * i) / double(n));
        sum *= (k == 0 ? 1.0 : 2.0) / double(n);
        EXPECT_LT(std::abs(sum - x(k, c)), 1e-12);
      }
      // Parseval with the one-sided scaling.
      const double time_power = q.col(c).squaredNorm() / double(n);
      double spectral = std::norm(x(0, c));
      for (Index k = 1; k < x.rows(); ++k) {
        const bool nyquist = n % 2 == 0 && k == n / 2;
        spectral += std::norm(x(k, c)) / (nyquist ? 4.0 : 2.0);
      }
      EXPECT_NEAR(time_power, spectral, 1e-9);
      // Inverse reconstruction from the one-sided spectrum.
      for (Index i = 0; i < n; ++i) {
        double value = x(0, c).real();
        for (Index k = 1; k < x.rows(); ++k) {
          const bool nyquist = n % 2 == 0 && k == n / 2;
          const double w = nyquist ? 0.5 : 1.0;
          value += w * (x(k, c) * std::polar(1.0, 2 * kPi * double(k * i) / double(n))).real();
        }
        EXPECT_NEAR(value, q(i, c), 1e-9);
      }
    }
  }
}

TEST(FieldFft, Linearity) {
  const Eigen::MatrixXd q1 = Eigen::MatrixXd::Random(48, 4);
  const Eigen::MatrixXd q2 = Eigen::MatrixXd::Random(48, 4);
  const Eigen::MatrixXcd lhs = one_sided_spectrum(Eigen::MatrixXd(2.0 * q1 + 3.0 * q2));
  const Eigen::MatrixXcd rhs = 2.0 * one_sided_spectrum(q1) + 3.0 * one_sided_spectrum(q2);
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FieldFft, HannWindowKeepsOnBinAmplitude) {
  const Index n = 128;
  Eigen::MatrixXd q(n, 1);
  for (Index i = 0; i < n; ++i) q(i, 0) = 0.7 * std::cos(2 * kPi * 10.0 * double(i) / double(n));
  const Eigen::MatrixXcd x = one_sided_spectrum(q, {true});
  EXPECT_NEAR(std::abs(x(10, 0)), 0.7, 1e-12);
  EXPECT_NEAR(std::abs(x(9, 0)), 0.35, 1e-12);  // Hann main lobe spreads half into each neighbour
}

TEST(FieldFft, Errors) {
  EXPECT_THROW(field_fft(series(times(1, 1.0), {[](double x) { return x; }})), ValidationError);
  ResultMeta meta{"acouPressure", "r", ResType::NODE, {}, AnalysisType::TRANSIENT, true};
  const ResultArray complex(meta, {4, 1, 1}, times(4, 1.0), ResultArray::Data::Ones(4, 1));
  EXPECT_THROW(field_fft(complex), ValidationError);
  Eigen::VectorXd t = times(8, 1.0);
  t(3) = 3.5;
  EXPECT_THROW(field_fft(series(t, {[](double x) { return x; }})), ValidationError);
}
