#pragma once

#include <filesystem>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"

namespace meshfield::extras {

/// Reads an ASCII or binary STL file into a TRIA3 mesh with one region named
/// after the solid ("stl" when unnamed). Per-facet vertices closer than
/// 1e-9 times the bounding-box diagonal are merged; facet normals are
/// ignored. A file is read as binary when its size matches the triangle count
/// in the header, otherwise as ASCII when it starts with "solid" and holds
/// no NUL bytes.
Mesh read_stl(const std::filesystem::path& path);

struct EnsightData {
  Mesh mesh;
  ResultContainer results;
};

/// Reads an EnSight Gold case with ASCII geometry and variable files. Each
/// part becomes a region; scalar and vector variables per node or per element
/// become TRANSIENT results per part, with the case time values as steps.
/// Only static geometry is supported.
EnsightData read_ensight_case(const std::filesystem::path& case_path);

}  // namespace meshfield::extras
