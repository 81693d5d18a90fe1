#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "meshfield/core/mesh.hpp"

namespace meshfield {

enum class AnalysisType { STATIC, TRANSIENT, HARMONIC, EIGENFREQUENCY };

/// Where a result lives: nodes or elements (field data) or a whole region
/// (history data).
enum class ResType { NODE, ELEMENT, REGION };

std::string_view to_string(AnalysisType t);
std::string_view to_string(ResType t);
/// Parses the lowercase names used in files ("transient", ...).
std::optional<AnalysisType> analysis_type_from_string(std::string_view s);

/// HARMONIC and EIGENFREQUENCY data is complex unless overridden.
constexpr bool default_is_complex(AnalysisType t) {
  return t == AnalysisType::HARMONIC || t == AnalysisType::EIGENFREQUENCY;
}

/// Automatic component names for a D-dimensional result.
std::vector<std::string> default_dim_names(Index num_dims);

/// Field quantity names understood by the acoustic PDEs of openCFS.
std::span<const std::string_view> known_quantities();
bool is_known_quantity(std::string_view quantity);

struct ResultMeta {
  std::string quantity;
  std::string region;
  ResType res_type = ResType::NODE;
  /// Empty means "choose from the shape".
  std::vector<std::string> dim_names;
  AnalysisType analysis_type = AnalysisType::TRANSIENT;
  /// Unset means "choose from analysis_type".
  std::optional<bool> is_complex;
  int multi_step_id = 1;
  /// Step indices whose values were passed through by an operator rather
  /// than computed. Not persisted.
  std::vector<Index> untreated_steps;
};

struct ResultInfo {
  std::string quantity;
  std::string region;
  ResType res_type = ResType::NODE;
  std::vector<std::string> dim_names;
  AnalysisType analysis_type = AnalysisType::TRANSIENT;
  bool is_complex = false;

  bool operator==(const ResultInfo&) const = default;
};

/// Dense result data plus metadata.
///
/// Field data (NODE / ELEMENT) has shape (N, M, D); history data (REGION) has
/// shape (N, D). Values are stored as an N x (M*D) row-major matrix per
/// component (real and, for complex data, imaginary), so that row k holds
/// step k with DOF-major ordering. History data uses M = 1 internally.
class ResultArray {
 public:
  using Data = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using StepView = Eigen::Map<const Data>;
  using MutableStepView = Eigen::Map<Data>;

  ResultArray() = default;
  /// `shape` must be rank 3 for NODE/ELEMENT and rank 2 for REGION.
  /// `real` and `imag` are N x (M*D). `imag` may be empty for complex data
  /// (zero imaginary part) and is discarded when the array resolves real.
  ResultArray(ResultMeta meta, std::vector<Index> shape, Eigen::VectorXd step_values,
              Data real, Data imag = Data());

  const ResultMeta& meta() const { return meta_; }
  const std::string& quantity() const { return meta_.quantity; }
  const std::string& region() const { return meta_.region; }
  ResType res_type() const { return meta_.res_type; }
  AnalysisType analysis_type() const { return meta_.analysis_type; }
  int multi_step_id() const { return meta_.multi_step_id; }
  const std::vector<std::string>& dim_names() const { return meta_.dim_names; }
  const Eigen::VectorXd& step_values() const { return step_values_; }

  bool is_field() const { return meta_.res_type != ResType::REGION; }
  bool is_complex() const { return is_complex_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<Index>& shape() const { return shape_; }
  Index num_steps() const { return shape_[0]; }
  Index num_dofs() const { return is_field() ? shape_[1] : 1; }
  Index num_dims() const { return shape_.back(); }

  const Data& real() const { return real_; }
  /// Empty for real data.
  const Data& imag() const { return imag_; }
  Data& real_mutable() { return real_; }
  Data& imag_mutable() { return imag_; }

  /// Step `k` as an M x D matrix.
  StepView step_real(Index k) const;
  StepView step_imag(Index k) const;
  MutableStepView step_real_mutable(Index k);
  MutableStepView step_imag_mutable(Index k);

  std::complex<double> value(Index step, Index dof, Index dim) const;

  void set_quantity(std::string quantity) { meta_.quantity = std::move(quantity); }
  void set_untreated_steps(std::vector<Index> steps) { meta_.untreated_steps = std::move(steps); }

  ResultInfo info() const;

  /// Structural equality: metadata, shape, step values and bitwise data.
  bool operator==(const ResultArray& other) const;

 private:
  ResultMeta meta_;
  std::vector<Index> shape_{0, 0, 1};
  Eigen::VectorXd step_values_;
  Data real_;
  Data imag_;
  bool is_complex_ = false;
};

/// All results of one multi-step.
class ResultContainer {
 public:
  ResultContainer() = default;
  explicit ResultContainer(AnalysisType analysis_type, int multi_step_id = 1);

  AnalysisType analysis_type() const { return analysis_type_; }
  int multi_step_id() const { return multi_step_id_; }
  const Eigen::VectorXd& step_values() const { return step_values_; }
  const std::vector<ResultArray>& arrays() const { return arrays_; }
  bool empty() const { return arrays_.empty(); }

  /// Appends an array. Its analysis type and multi-step id must equal the
  /// container's, its step values those of the arrays already present, and
  /// (quantity, region) must be new. The first array of a default-constructed
  /// container fixes the analysis type and multi-step id.
  void add(ResultArray array);

  const ResultArray* find(std::string_view quantity, std::string_view region) const;
  /// Throws ValidationError if absent.
  const ResultArray& get(std::string_view quantity, std::string_view region) const;

  std::vector<ResultInfo> infos() const;

  bool operator==(const ResultContainer& other) const;

 private:
  AnalysisType analysis_type_ = AnalysisType::TRANSIENT;
  int multi_step_id_ = 1;
  bool typed_ = false;
  Eigen::VectorXd step_values_;
  std::vector<ResultArray> arrays_;
};

}  // namespace meshfield
