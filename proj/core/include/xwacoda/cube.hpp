#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xwacoda/query.hpp"
#include "xwacoda/store.hpp"

namespace xwacoda {

struct AxisSpec {
  std::string dimension;
  std::string level;

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Everything needed to (re)build a cube from the store.
struct CubeSpec {
  std::string fact_class;
  std::vector<AxisSpec> axes;
  std::string measure{kStar};
  AggregateFunction aggregate = AggregateFunction::Count;
  std::vector<Predicate> predicates;
  std::vector<MemberFilter> filters;

  friend bool operator==(const CubeSpec&, const CubeSpec&) = default;
};

struct CubeAxis {
  std::string dimension;
  std::string level;
  std::vector<std::string> members;  // ascending, each present in some cell

  friend bool operator==(const CubeAxis&, const CubeAxis&) = default;
};

/// Partial aggregate held by a cell. Keeping sum, count and extrema lets every
/// aggregate (avg included) be recombined exactly when cells merge.
struct CubeCell {
  std::int64_t facts = 0;  // contributing facts
  std::int64_t n = 0;      // non-null measure contributions
  double sum = 0;
  double min = 0;
  double max = 0;

  void merge(const CubeCell& other);
  friend bool operator==(const CubeCell&, const CubeCell&) = default;
};

using Coordinate = std::vector<std::string>;

/// Sparse cube: only coordinates with at least one contributing fact hold a
/// cell. Coordinates list member ids in axis order.
class Cube {
 public:
  Cube() = default;

  const std::string& fact_class() const { return fact_class_; }
  const std::string& measure() const { return measure_; }
  AggregateFunction aggregate() const { return aggregate_; }
  const std::vector<CubeAxis>& axes() const { return axes_; }
  const std::map<Coordinate, CubeCell>& cells() const { return cells_; }
  const std::vector<Predicate>& predicates() const { return predicates_; }
  const std::vector<MemberFilter>& filters() const { return filters_; }

  std::optional<std::size_t> axis_index(std::string_view dimension) const;

  /// True when values are integers (counts, or sum/min/max of an integer
  /// measure).
  bool integral() const { return integral_; }

  /// The aggregate's value for a cell; std::nullopt when every contribution
  /// to a measure aggregate was null.
  std::optional<double> value(const CubeCell& cell) const;
  std::optional<double> value_at(const Coordinate& coordinate) const;

  /// A spec that build_cube turns back into this cube.
  CubeSpec spec() const;

  friend bool operator==(const Cube&, const Cube&) = default;

 private:
  friend Cube build_cube(const WarehouseStore&, const CubeSpec&);
  friend Cube roll_up(const Cube&, std::string_view, const WarehouseStore&);
  friend Cube slice(const Cube&, std::string_view, std::string_view);
  friend Cube dice(const Cube&, const std::map<std::string, std::vector<std::string>>&);

  void rebuild_axes();

  std::string fact_class_;
  std::string measure_{kStar};
  AggregateFunction aggregate_ = AggregateFunction::Count;
  bool integral_ = true;
  std::vector<CubeAxis> axes_;
  std::map<Coordinate, CubeCell> cells_;
  std::vector<Predicate> predicates_;
  std::vector<MemberFilter> filters_;
};

/// Evaluates the cube spec as a grouped query (axes as group keys) and reshapes
/// the result into sparse cells. Throws as evaluate does.
Cube build_cube(const WarehouseStore& store, const CubeSpec& spec);

/// Re-aggregates one axis at the next coarser level through Roll-up links.
/// Throws AlreadyCoarsest or NonStrictHierarchy.
Cube roll_up(const Cube& cube, std::string_view dimension, const WarehouseStore& store);

/// Rebuilds the cube from the store with one axis at the next finer level.
/// Throws AlreadyFinest.
Cube drill_down(const Cube& cube, std::string_view dimension, const WarehouseStore& store);

/// Fixes one axis to a member and removes it. Throws UnknownAxisMember.
Cube slice(const Cube& cube, std::string_view dimension, std::string_view member);

/// Restricts axes to the given member sets. Throws UnknownAxisMember.
Cube dice(const Cube& cube, const std::map<std::string, std::vector<std::string>>& keep);

/// Cells as (coordinate, aggregate value) pairs in coordinate order.
std::vector<std::pair<Coordinate, std::optional<double>>> flatten(const Cube& cube);

}  // namespace xwacoda
