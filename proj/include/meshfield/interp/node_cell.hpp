#pragma once

#include <string_view>

#include "meshfield/core/mesh.hpp"
#include "meshfield/core/result.hpp"
#include "meshfield/interp/interpolation_matrix.hpp"

namespace meshfield::interp {

/// Element value = mean of its node values. Rows follow the region element
/// order, columns the region node order.
InterpolationMatrix node2cell_matrix(const Mesh& mesh, std::string_view region);

/// Node value = mean of the values of the region elements adjacent to it.
/// Nodes without an adjacent element give unmatched (zero) rows and a warning.
InterpolationMatrix cell2node_matrix(const Mesh& mesh, std::string_view region);

ResultArray node2cell(const Mesh& mesh, std::string_view region, const ResultArray& values);
ResultArray cell2node(const Mesh& mesh, std::string_view region, const ResultArray& values);

}  // namespace meshfield::interp
