#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace xwacoda {

enum class ValueType { String, Integer, Decimal, Date };

std::string_view to_string(ValueType type);
std::optional<ValueType> parse_value_type(std::string_view text);

inline bool is_numeric(ValueType type) {
  return type == ValueType::Integer || type == ValueType::Decimal;
}

/// ISO-8601 calendar date.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

std::optional<Date> parse_iso_date(std::string_view text);
std::string format_date(const Date& date);

/// A typed attribute or literal value. The alternative always matches the
/// declared ValueType of the attribute it belongs to.
using Value = std::variant<std::string, std::int64_t, double, Date>;

ValueType type_of(const Value& value);

/// Parses `text` under `type`; std::nullopt when it is not a valid literal.
std::optional<Value> parse_value(std::string_view text, ValueType type);

/// Canonical text form; parse_value(format_value(v), type_of(v)) == v.
std::string format_value(const Value& value);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

std::optional<std::int64_t> parse_int64(std::string_view text);
std::optional<double> parse_double(std::string_view text);

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(Comparator op);

/// Compares two values of the same type; integers and decimals compare
/// numerically with each other. Returns false on any other type mismatch.
bool compare_values(const Value& lhs, Comparator op, const Value& rhs);

}  // namespace xwacoda
