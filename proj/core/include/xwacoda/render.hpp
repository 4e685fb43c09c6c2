#pragma once

#include <string>

#include "xwacoda/cube.hpp"
#include "xwacoda/query.hpp"

namespace xwacoda {

enum class TableFormat {
  Text,       // aligned columns under a header and a dashed rule
  Delimited,  // tab-separated, header line first
};

std::string render_table(const ResultTable& table, TableFormat format);

/// Text value of a cube cell; empty for null.
std::string format_cube_value(const Cube& cube, std::optional<double> value);

/// Pivot rendering: first axis on rows, second on columns, absent cells blank.
/// A zero-axis cube renders its scalar. Throws Error(ValidationError) for
/// more than two axes.
std::string render_pivot(const Cube& cube);

}  // namespace xwacoda
