#include "meshfield/core/result.hpp"

#include <algorithm>
#include <array>

#include "meshfield/core/error.hpp"

namespace meshfield {
namespace {

constexpr std::array<std::string_view, 14> kKnownQuantities = {
    "acouPressure",      "acouVelocity",       "acouPotential",         "acoutIntensity",
    "fluidMechVelocity", "meanFluidMechVelocity", "fluidMechPressure",  "fluidMechDensity",
    "fluidMechVorticity", "fluidMechGradPressure", "acouRhsLoad",       "acouRhsLoadP",
    "vortexRhsLoad",     "acouDivLighthillTensor",
};

bool same_bits(const ResultArray::Data& a, const ResultArray::Data& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

std::string_view to_string(AnalysisType t) {
  switch (t) {
    case AnalysisType::STATIC: return "static";
    case AnalysisType::TRANSIENT: return "transient";
    case AnalysisType::HARMONIC: return "harmonic";
    case AnalysisType::EIGENFREQUENCY: return "eigenfrequency";
  }
  return "static";
}

std::string_view to_string(ResType t) {
  switch (t) {
    case ResType::NODE: return "Nodes";
    case ResType::ELEMENT: return "Elements";
    case ResType::REGION: return "Region";
  }
  return "Nodes";
}

std::optional<AnalysisType> analysis_type_from_string(std::string_view s) {
  for (auto t : {AnalysisType::STATIC, AnalysisType::TRANSIENT, AnalysisType::HARMONIC,
                 AnalysisType::EIGENFREQUENCY}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::vector<std::string> default_dim_names(Index num_dims) {
  switch (num_dims) {
    case 1: return {"-"};
    case 3: return {"x", "y", "z"};
    case 6: return {"xx", "yy", "zz", "yz", "xz", "xy"};
    default: break;
  }
  std::vector<std::string> names;
  for (Index d = 0; d < num_dims; ++d) names.push_back("d" + std::to_string(d + 1));
  return names;
}

std::span<const std::string_view> known_quantities() { return kKnownQuantities; }

bool is_known_quantity(std::string_view quantity) {
  return std::find(kKnownQuantities.begin(), kKnownQuantities.end(), quantity) !=
         kKnownQuantities.end();
}

ResultArray::ResultArray(ResultMeta meta, std::vector<Index> shape, Eigen::VectorXd step_values,
                         Data real, Data imag)
    : meta_(std::move(meta)),
      shape_(std::move(shape)),
      step_values_(std::move(step_values)),
      real_(std::move(real)),
      imag_(std::move(imag)) {
  const std::string who = "result " + meta_.quantity + "/" + meta_.region + ": ";
  const int expected_rank = meta_.res_type == ResType::REGION ? 2 : 3;
  if (rank() != expected_rank) {
    throw ValidationError(who + (expected_rank == 3 ? "field" : "history") +
                          " data requires rank " + std::to_string(expected_rank) + ", got " +
                          std::to_string(rank()));
  }
  if (std::any_of(shape_.begin(), shape_.end(), [](Index n) { return n < 0; })) {
    throw ValidationError(who + "negative extent in shape");
  }
  if (real_.rows() != num_steps() || real_.cols() != num_dofs() * num_dims()) {
    throw ValidationError(who + "data is " + std::to_string(real_.rows()) + "x" +
                          std::to_string(real_.cols()) + ", shape requires " +
                          std::to_string(num_steps()) + "x" +
                          std::to_string(num_dofs() * num_dims()));
  }
  if (step_values_.size() != num_steps()) {
    throw ValidationError(who + "expected " + std::to_string(num_steps()) + " step values, got " +
                          std::to_string(step_values_.size()));
  }
  if (meta_.dim_names.empty()) {
    meta_.dim_names = default_dim_names(num_dims());
  } else if (static_cast<Index>(meta_.dim_names.size()) != num_dims()) {
    throw ValidationError(who + "dim_names has " + std::to_string(meta_.dim_names.size()) +
                          " entries for D=" + std::to_string(num_dims()));
  }
  is_complex_ = meta_.is_complex.value_or(default_is_complex(meta_.analysis_type));
  if (!is_complex_) {
    imag_.resize(0, 0);
  } else if (imag_.size() == 0) {
    imag_ = Data::Zero(real_.rows(), real_.cols());
  } else if (imag_.rows() != real_.rows() || imag_.cols() != real_.cols()) {
    throw ValidationError(who + "imaginary part shape differs from real part");
  }
}

ResultArray::StepView ResultArray::step_real(Index k) const {
  return {real_.row(k).data(), num_dofs(), num_dims()};
}

ResultArray::StepView ResultArray::step_imag(Index k) const {
  if (!is_complex_) throw ValidationError("step_imag on real-valued result " + meta_.quantity);
  return {imag_.row(k).data(), num_dofs(), num_dims()};
}

ResultArray::MutableStepView ResultArray::step_real_mutable(Index k) {
  return {real_.row(k).data(), num_dofs(), num_dims()};
}

ResultArray::MutableStepView ResultArray::step_imag_mutable(Index k) {
  if (!is_complex_) throw ValidationError("step_imag on real-valued result " + meta_.quantity);
  return {imag_.row(k).data(), num_dofs(), num_dims()};
}

std::complex<double> ResultArray::value(Index step, Index dof, Index dim) const {
  const Index col = dof * num_dims() + dim;
  return {real_(step, col), is_complex_ ? imag_(step, col) : 0.0};
}

ResultInfo ResultArray::info() const {
  return ResultInfo{meta_.quantity, meta_.region, meta_.res_type, meta_.dim_names,
                    meta_.analysis_type, is_complex_};
}

bool ResultArray::operator==(const ResultArray& other) const {
  return info() == other.info() && meta_.multi_step_id == other.meta_.multi_step_id &&
         shape_ == other.shape_ && step_values_.size() == other.step_values_.size() &&
         (step_values_.array() == other.step_values_.array()).all() &&
         same_bits(real_, other.real_) && same_bits(imag_, other.imag_);
}

ResultContainer::ResultContainer(AnalysisType analysis_type, int multi_step_id)
    : analysis_type_(analysis_type), multi_step_id_(multi_step_id), typed_(true) {}

void ResultContainer::add(ResultArray array) {
  const std::string who = "result " + array.quantity() + "/" + array.region() + ": ";
  if (!typed_) {
    analysis_type_ = array.analysis_type();
    multi_step_id_ = array.multi_step_id();
    typed_ = true;
  }
  if (array.analysis_type() != analysis_type_) {
    throw ValidationError(who + "analysis type differs from container");
  }
  if (array.multi_step_id() != multi_step_id_) {
    throw ValidationError(who + "multi-step id differs from container");
  }
  if (find(array.quantity(), array.region()) != nullptr) {
    throw ValidationError(who + "already present in container");
  }
  if (arrays_.empty()) {
    step_values_ = array.step_values();
  } else if (step_values_.size() != array.step_values().size() ||
             (step_values_.array() != array.step_values().array()).any()) {
    throw ValidationError(who + "step values differ from container");
  }
  arrays_.push_back(std::move(array));
}

const ResultArray* ResultContainer::find(std::string_view quantity,
                                         std::string_view region) const {
  for (const auto& a : arrays_) {
    if (a.quantity() == quantity && a.region() == region) return &a;
  }
  return nullptr;
}

const ResultArray& ResultContainer::get(std::string_view quantity, std::string_view region) const {
  if (const auto* a = find(quantity, region)) return *a;
  throw ValidationError("no result " + std::string(quantity) + " on region " +
                        std::string(region));
}

std::vector<ResultInfo> ResultContainer::infos() const {
  std::vector<ResultInfo> out;
  out.reserve(arrays_.size());
  for (const auto& a : arrays_) out.push_back(a.info());
  return out;
}

bool ResultContainer::operator==(const ResultContainer& other) const {
  if (empty() && other.empty()) return true;
  return analysis_type_ == other.analysis_type_ && multi_step_id_ == other.multi_step_id_ &&
         step_values_.size() == other.step_values_.size() &&
         (step_values_.array() == other.step_values_.array()).all() &&
         arrays_ == other.arrays_;
}

}  // namespace meshfield
