#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xwacoda/store.hpp"
#include "xwacoda/value.hpp"

namespace xwacoda {

/// Selection over a member attribute at any level of a dimension.
struct Predicate {
  std::string dimension;
  std::string level;
  std::string attribute;
  Comparator comparator = Comparator::Eq;
  Value literal;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct GroupKey {
  std::string dimension;
  std::string level;

  friend bool operator==(const GroupKey&, const GroupKey&) = default;
};

enum class AggregateFunction { Sum, Count, Avg, Min, Max };

std::string_view to_string(AggregateFunction fn);
std::optional<AggregateFunction> parse_aggregate_function(std::string_view text);

inline constexpr std::string_view kStar = "*";

struct AggregateSpec {
  AggregateFunction function = AggregateFunction::Count;
  std::string measure{kStar};  // "*" only with count

  bool is_star() const { return measure == kStar; }
  std::string label() const;

  friend bool operator==(const AggregateSpec&, const AggregateSpec&) = default;
};

struct AnalyticQuery {
  std::string fact_class;
  std::vector<Predicate> predicates;
  std::vector<GroupKey> group_by;
  std::vector<AggregateSpec> aggregates;

  friend bool operator==(const AnalyticQuery&, const AnalyticQuery&) = default;
};

/// Grammar (keywords and aggregate names are case-insensitive):
///
///   query     := FROM ident [WHERE pred {AND pred}] [GROUP BY key {, key}]
///                SELECT agg {, agg}
///   pred      := ident '.' ident '.' ident op literal
///   key       := ident '.' ident
///   agg       := (sum|count|avg|min|max) '(' (ident | '*') ')'
///   op        := = | != | <> | < | <= | > | >=
///   literal   := integer | decimal | 'text' | "text"
///
/// Identifiers are [A-Za-z_][A-Za-z0-9_-]*. Quoted literals are typed by the
/// attribute they are compared against (date attributes take 'YYYY-MM-DD').
/// Throws SyntaxError with a zero-based offset.
AnalyticQuery parse_query(std::string_view text);

/// Renders a query back to the grammar above.
std::string format_query(const AnalyticQuery& query);

/// Checks every reference against the model and coerces literals to the
/// declared attribute type. Throws Error(ValidationError).
AnalyticQuery validate_query(const WarehouseModel& model, const AnalyticQuery& query);

enum class ColumnRole { GroupMember, GroupAttribute, Aggregate };
enum class ColumnType { String, Integer, Decimal, Date };

struct ResultColumn {
  std::string name;
  ColumnRole role = ColumnRole::Aggregate;
  ColumnType type = ColumnType::String;

  friend bool operator==(const ResultColumn&, const ResultColumn&) = default;
};

/// std::monostate marks a null aggregate (every contribution was null).
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

std::string format_cell(const Cell& cell);

/// Group-key columns (member id, then that level's attributes) followed by one
/// column per aggregate. Rows ascend by group-key member ids.
struct ResultTable {
  std::vector<ResultColumn> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Base-level members of p.dimension whose own value (base-level predicate)
/// or whose ancestor at p.level satisfies the predicate. Sorted ascending by
/// ordinal. Throws Error(NonStrictHierarchy) when a base member has ancestors
/// at p.level that disagree on the predicate.
std::vector<MemberIndex> resolve_selection(const WarehouseStore& store, const Predicate& p);

/// Keeps only facts whose member at (dimension, level) is one of `members`.
/// Cube slice and dice are recorded as filters of this kind.
struct MemberFilter {
  std::string dimension;
  std::string level;
  std::vector<std::string> members;

  friend bool operator==(const MemberFilter&, const MemberFilter&) = default;
};

/// Star-join evaluation: per-dimension selection sets intersected, one scan
/// over the fact columns, hash grouping on Roll-up ancestors.
ResultTable evaluate(const WarehouseStore& store, const AnalyticQuery& query);
ResultTable evaluate(const WarehouseStore& store, const AnalyticQuery& query,
                     std::span<const MemberFilter> filters);

}  // namespace xwacoda
