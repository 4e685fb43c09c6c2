#include "xwacoda/render.hpp"

#include <algorithm>
#include <cmath>

namespace xwacoda {

namespace {

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

std::string render_grid(const std::vector<std::vector<std::string>>& grid, const std::vector<bool>& right_align) {
  std::vector<std::size_t> width(grid.empty() ? 0 : grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (c) line += "  ";
      line += pad(grid[r][c], width[c], r > 0 && right_align[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::string rule;
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c) rule += "  ";
        rule += std::string(width[c], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

}  // namespace

std::string render_table(const ResultTable& table, TableFormat format) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header;
  std::vector<bool> numeric;
  for (const auto& c : table.columns) {
    header.push_back(c.name);
    numeric.push_back(c.type == ColumnType::Integer || c.type == ColumnType::Decimal);
  }
  grid.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (const auto& cell : row) cells.push_back(format_cell(cell));
    grid.push_back(std::move(cells));
  }
  if (format == TableFormat::Text) return render_grid(grid, numeric);

  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += '\t';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string format_cube_value(const Cube& cube, std::optional<double> value) {
  if (!value) return "";
  if (cube.integral()) return std::to_string(static_cast<std::int64_t>(std::llround(*value)));
  return format_double(*value);
}

std::string render_pivot(const Cube& cube) {
  const auto& axes = cube.axes();
  const std::string label = std::string(to_string(cube.aggregate())) + "(" + cube.measure() + ")";
  if (axes.size() > 2) {
    throw Error(ErrorCode::ValidationError, "a pivot shows at most two axes; slice or dice the cube first (it has " +
                                                std::to_string(axes.size()) + ")");
  }
  std::vector<std::vector<std::string>> grid;
  if (axes.empty()) {
    grid.push_back({label});
    grid.push_back({format_cube_value(cube, cube.value_at({}))});
    return render_grid(grid, {true});
  }
  const auto& rows = axes[0];
  if (axes.size() == 1) {
    grid.push_back({rows.dimension + "." + rows.level, label});
    for (const auto& m : rows.members) grid.push_back({m, format_cube_value(cube, cube.value_at({m}))});
    return render_grid(grid, {false, true});
  }
  const auto& cols = axes[1];
  std::vector<std::string> header{rows.dimension + "." + rows.level + " \\ " + cols.dimension + "." + cols.level};
  header.insert(header.end(), cols.members.begin(), cols.members.end());
  grid.push_back(header);
  for (const auto& r : rows.members) {
    std::vector<std::string> line{r};
    for (const auto& c : cols.members) line.push_back(format_cube_value(cube, cube.value_at({r, c})));
    grid.push_back(std::move(line));
  }
  std::vector<bool> right(header.size(), true);
  right[0] = false;
  return render_grid(grid, right);
}

}  // namespace xwacoda
