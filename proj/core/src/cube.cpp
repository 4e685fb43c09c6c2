#include "xwacoda/cube.hpp"

#include <algorithm>
#include <set>

namespace xwacoda {

void CubeCell::merge(const CubeCell& other) {
  facts += other.facts;
  if (other.n > 0) {
    if (n == 0) {
      min = other.min;
      max = other.max;
    } else {
      min = std::min(min, other.min);
      max = std::max(max, other.max);
    }
    n += other.n;
    sum += other.sum;
  }
}

std::optional<std::size_t> Cube::axis_index(std::string_view dimension) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].dimension == dimension) return i;
  return std::nullopt;
}

std::optional<double> Cube::value(const CubeCell& cell) const {
  switch (aggregate_) {
    case AggregateFunction::Count:
      return static_cast<double>(measure_ == kStar ? cell.facts : cell.n);
    case AggregateFunction::Sum:
      if (cell.n == 0) return std::nullopt;
      return cell.sum;
    case AggregateFunction::Avg:
      if (cell.n == 0) return std::nullopt;
      return cell.sum / static_cast<double>(cell.n);
    case AggregateFunction::Min:
      if (cell.n == 0) return std::nullopt;
      return cell.min;
    case AggregateFunction::Max:
      if (cell.n == 0) return std::nullopt;
      return cell.max;
  }
  return std::nullopt;
}

std::optional<double> Cube::value_at(const Coordinate& coordinate) const {
  auto it = cells_.find(coordinate);
  if (it == cells_.end()) return std::nullopt;
  return value(it->second);
}

CubeSpec Cube::spec() const {
  CubeSpec s;
  s.fact_class = fact_class_;
  for (const auto& a : axes_) s.axes.push_back({a.dimension, a.level});
  s.measure = measure_;
  s.aggregate = aggregate_;
  s.predicates = predicates_;
  s.filters = filters_;
  return s;
}

void Cube::rebuild_axes() {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    std::set<std::string> present;
    for (const auto& [coord, cell] : cells_) present.insert(coord[i]);
    axes_[i].members.assign(present.begin(), present.end());
  }
}

namespace {

double as_double(const Cell& c) {
  if (auto i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (auto d = std::get_if<double>(&c)) return *d;
  return 0.0;
}

std::int64_t as_int(const Cell& c) {
  if (auto i = std::get_if<std::int64_t>(&c)) return *i;
  return 0;
}

}  // namespace

Cube build_cube(const WarehouseStore& store, const CubeSpec& spec) {
  if (spec.axes.empty()) throw Error(ErrorCode::ValidationError, "a cube needs at least one axis");

  AnalyticQuery q;
  q.fact_class = spec.fact_class;
  for (const auto& a : spec.axes) q.group_by.push_back({a.dimension, a.level});
  // Validate the aggregate/measure pairing exactly as a query would; keeps coerced literals.
  q.predicates = validate_query(store.model(), AnalyticQuery{spec.fact_class, spec.predicates, q.group_by,
                                                             {AggregateSpec{spec.aggregate, spec.measure}}})
                     .predicates;
  std::set<std::string> seen;
  for (const auto& a : spec.axes) {
    if (!seen.insert(a.dimension).second)
      throw Error(ErrorCode::ValidationError, "dimension " + a.dimension + " appears on two axes");
  }

  const bool star = spec.measure == kStar;
  q.aggregates.push_back({AggregateFunction::Count, std::string(kStar)});
  if (!star) {
    for (auto fn : {AggregateFunction::Count, AggregateFunction::Sum, AggregateFunction::Min, AggregateFunction::Max})
      q.aggregates.push_back({fn, spec.measure});
  }
  const ResultTable table = evaluate(store, q, spec.filters);

  std::vector<std::size_t> member_columns;
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    if (table.columns[c].role == ColumnRole::GroupMember) member_columns.push_back(c);
  const std::size_t first_agg = table.columns.size() - q.aggregates.size();

  Cube cube;
  cube.fact_class_ = spec.fact_class;
  cube.measure_ = spec.measure;
  cube.aggregate_ = spec.aggregate;
  cube.integral_ = spec.aggregate == AggregateFunction::Count ||
                   (spec.aggregate != AggregateFunction::Avg &&
                    store.model().find_fact_class(spec.fact_class)->find_measure(spec.measure)->value_type ==
                        ValueType::Integer);
  cube.predicates_ = q.predicates;
  cube.filters_ = spec.filters;
  for (const auto& a : spec.axes) cube.axes_.push_back({a.dimension, a.level, {}});

  for (const auto& row : table.rows) {
    Coordinate coord;
    for (std::size_t c : member_columns) coord.push_back(std::get<std::string>(row[c]));
    CubeCell cell;
    cell.facts = as_int(row[first_agg]);
    if (!star) {
      cell.n = as_int(row[first_agg + 1]);
      cell.sum = as_double(row[first_agg + 2]);
      cell.min = as_double(row[first_agg + 3]);
      cell.max = as_double(row[first_agg + 4]);
    }
    if (cell.facts > 0) cube.cells_.emplace(std::move(coord), cell);
  }
  cube.rebuild_axes();
  return cube;
}

namespace {

std::size_t require_axis(const Cube& cube, std::string_view dimension) {
  auto i = cube.axis_index(dimension);
  if (!i) throw Error(ErrorCode::UnknownAxisMember, "cube has no axis for dimension '" + std::string(dimension) + "'");
  return *i;
}

}  // namespace

Cube roll_up(const Cube& cube, std::string_view dimension, const WarehouseStore& store) {
  const std::size_t axis = require_axis(cube, dimension);
  const auto& dim = store.dimension(dimension);
  const std::size_t level = dim.def().level_index(cube.axes_[axis].level).value();
  if (level + 1 >= dim.level_count()) {
    throw Error(ErrorCode::AlreadyCoarsest,
                "axis " + std::string(dimension) + " is already at its coarsest level " + cube.axes_[axis].level);
  }

  Cube out = cube;
  out.axes_[axis].level = dim.def().levels[level + 1].id;
  out.cells_.clear();
  for (const auto& [coord, cell] : cube.cells_) {
    const auto m = dim.find(coord[axis]).value();
    const auto parents = dim.parents(m);
    if (parents.size() != 1) {
      throw Error(ErrorCode::NonStrictHierarchy, "member " + coord[axis] + " has " +
                                                     std::to_string(parents.size()) + " Roll-up parents");
    }
    Coordinate up = coord;
    up[axis] = dim.member(parents[0]).id;
    auto [it, inserted] = out.cells_.try_emplace(std::move(up), cell);
    if (!inserted) it->second.merge(cell);
  }
  out.rebuild_axes();
  return out;
}

Cube drill_down(const Cube& cube, std::string_view dimension, const WarehouseStore& store) {
  const std::size_t axis = require_axis(cube, dimension);
  const auto& dim = store.dimension(dimension);
  const std::size_t level = dim.def().level_index(cube.axes()[axis].level).value();
  if (level == 0) {
    throw Error(ErrorCode::AlreadyFinest,
                "axis " + std::string(dimension) + " is already at its finest level " + cube.axes()[axis].level);
  }
  CubeSpec spec = cube.spec();
  spec.axes[axis].level = dim.def().levels[level - 1].id;
  return build_cube(store, spec);
}

Cube slice(const Cube& cube, std::string_view dimension, std::string_view member) {
  const std::size_t axis = require_axis(cube, dimension);
  const auto& members = cube.axes_[axis].members;
  if (std::find(members.begin(), members.end(), member) == members.end()) {
    throw Error(ErrorCode::UnknownAxisMember,
                "member '" + std::string(member) + "' is not on axis " + std::string(dimension));
  }
  Cube out = cube;
  out.filters_.push_back({std::string(dimension), cube.axes_[axis].level, {std::string(member)}});
  out.axes_.erase(out.axes_.begin() + static_cast<std::ptrdiff_t>(axis));
  out.cells_.clear();
  for (const auto& [coord, cell] : cube.cells_) {
    if (coord[axis] != member) continue;
    Coordinate rest = coord;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(axis));
    out.cells_.emplace(std::move(rest), cell);
  }
  out.rebuild_axes();
  return out;
}

Cube dice(const Cube& cube, const std::map<std::string, std::vector<std::string>>& keep) {
  std::vector<std::pair<std::size_t, std::set<std::string>>> kept;
  Cube out = cube;
  for (const auto& [dimension, members] : keep) {
    const std::size_t axis = require_axis(cube, dimension);
    const auto& on_axis = cube.axes_[axis].members;
    for (const auto& m : members) {
      if (std::find(on_axis.begin(), on_axis.end(), m) == on_axis.end())
        throw Error(ErrorCode::UnknownAxisMember, "member '" + m + "' is not on axis " + dimension);
    }
    std::vector<std::string> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    // Keeping every axis member filters nothing; leave the cube spec untouched.
    if (sorted != on_axis) out.filters_.push_back({dimension, cube.axes_[axis].level, sorted});
    kept.emplace_back(axis, std::set<std::string>(sorted.begin(), sorted.end()));
  }
  out.cells_.clear();
  for (const auto& [coord, cell] : cube.cells_) {
    bool in = std::all_of(kept.begin(), kept.end(), [&](const auto& k) { return k.second.count(coord[k.first]) > 0; });
    if (in) out.cells_.emplace(coord, cell);
  }
  out.rebuild_axes();
  return out;
}

std::vector<std::pair<Coordinate, std::optional<double>>> flatten(const Cube& cube) {
  std::vector<std::pair<Coordinate, std::optional<double>>> out;
  out.reserve(cube.cells().size());
  for (const auto& [coord, cell] : cube.cells()) out.emplace_back(coord, cube.value(cell));
  return out;
}

}  // namespace xwacoda
