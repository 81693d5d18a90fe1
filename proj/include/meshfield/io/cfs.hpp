#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::io {

/// Reader for openCFS-style HDF5 files (`*.cfs`).
///
/// Layout:
///   /Mesh                              attr Dimension (u32)
///   /Mesh/Nodes/Coordinates            f64 [num_nodes x 3]
///   /Mesh/Elements/Types               i32 [num_elements]
///   /Mesh/Elements/Connectivity        u32 [num_elements x max_nodes], 1-based, 0-padded
///   /Mesh/Regions/<name>/{Nodes,Elements}  u32, attrs Dimension (u32), IsGroup (u8)
///   /Results/Mesh/MultiStep_<id>       attrs AnalysisType, LastStepNum, LastStepValue
///     Step_<k>                         attr StepValue
///       <quantity>/<region>/<Nodes|Elements>/{Real,Imag}   f64 [M x D]
///     ResultDescription/<quantity>/    DefinedOn, NumDOFs, DOFNames, EntityNames,
///                                      StepNumbers, StepValues
///   /Results/History/MultiStep_<id>    attr AnalysisType, StepValues f64 [N]
///     <quantity>/<region>/{Real,Imag}  f64 [N x D], DOFNames
class CfsReader {
 public:
  /// Throws FileNotFoundError or MalformedFileError.
  explicit CfsReader(const std::filesystem::path& path);
  ~CfsReader();
  CfsReader(CfsReader&&) noexcept;
  CfsReader& operator=(CfsReader&&) noexcept;

  Mesh read_mesh();

  bool has_results() const;
  /// Multi-step ids present under /Results, ascending.
  std::vector<int> multi_step_ids() const;
  /// Reads every quantity of one multi-step. Throws MalformedFileError listing
  /// the available ids when `multi_step_id` is absent.
  ResultContainer read_multi_step(int multi_step_id = 1);

  /// HDF5 paths of every dataset and attribute read so far.
  const std::vector<std::string>& access_log() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class CfsWriter {
 public:
  explicit CfsWriter(std::filesystem::path path);

  /// Validates `result` against `mesh` and writes both. An empty container
  /// produces a mesh-only file.
  void create_file(const Mesh& mesh, const ResultContainer& result = {});

 private:
  std::filesystem::path path_;
};

Mesh read_mesh(const std::filesystem::path& path);
ResultContainer read_data(const std::filesystem::path& path, int multi_step_id = 1);
/// Mesh plus results of `multi_step_id`; files without /Results yield an
/// empty container.
std::pair<Mesh, ResultContainer> read_file(const std::filesystem::path& path,
                                           int multi_step_id = 1);
void write_file(const std::filesystem::path& path, const Mesh& mesh,
                const ResultContainer& result = {});

}  // namespace meshfield::io
