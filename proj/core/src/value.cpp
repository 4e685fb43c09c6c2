#include "xwacoda/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace xwacoda {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::String: return "string";
    case ValueType::Integer: return "integer";
    case ValueType::Decimal: return "decimal";
    case ValueType::Date: return "date";
  }
  return "string";
}

std::optional<ValueType> parse_value_type(std::string_view text) {
  if (text == "string") return ValueType::String;
  if (text == "integer") return ValueType::Integer;
  if (text == "decimal") return ValueType::Decimal;
  if (text == "date") return ValueType::Date;
  return std::nullopt;
}

namespace {

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return !s.empty();
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  Date date{std::stoi(std::string(y)), std::stoi(std::string(m)), std::stoi(std::string(d))};
  if (date.month < 1 || date.month > 12) return std::nullopt;
  if (date.day < 1 || date.day > days_in_month(date.year, date.month)) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month, date.day);
  return buf;
}

ValueType type_of(const Value& value) {
  switch (value.index()) {
    case 0: return ValueType::String;
    case 1: return ValueType::Integer;
    case 2: return ValueType::Decimal;
    default: return ValueType::Date;
  }
}

std::optional<std::int64_t> parse_int64(std::string_view text) {
  std::int64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  if (first == last) return std::nullopt;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return out;
}

std::optional<double> parse_double(std::string_view text) {
  double out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  if (first == last) return std::nullopt;
  auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out)) return std::nullopt;
  return out;
}

std::optional<Value> parse_value(std::string_view text, ValueType type) {
  switch (type) {
    case ValueType::String:
      return Value{std::string(text)};
    case ValueType::Integer:
      if (auto v = parse_int64(text)) return Value{*v};
      return std::nullopt;
    case ValueType::Decimal:
      if (auto v = parse_double(text)) return Value{*v};
      return std::nullopt;
    case ValueType::Date:
      if (auto v = parse_iso_date(text)) return Value{*v};
      return std::nullopt;
  }
  return std::nullopt;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_value(const Value& value) {
  switch (value.index()) {
    case 0: return std::get<std::string>(value);
    case 1: return std::to_string(std::get<std::int64_t>(value));
    case 2: return format_double(std::get<double>(value));
    default: return format_date(std::get<Date>(value));
  }
}

std::string_view to_string(Comparator op) {
  switch (op) {
    case Comparator::Eq: return "=";
    case Comparator::Ne: return "!=";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
  }
  return "=";
}

namespace {

template <typename T>
bool apply(const T& a, Comparator op, const T& b) {
  switch (op) {
    case Comparator::Eq: return a == b;
    case Comparator::Ne: return !(a == b);
    case Comparator::Lt: return a < b;
    case Comparator::Le: return !(b < a);
    case Comparator::Gt: return b < a;
    case Comparator::Ge: return !(a < b);
  }
  return false;
}

}  // namespace

bool compare_values(const Value& lhs, Comparator op, const Value& rhs) {
  if (lhs.index() == rhs.index()) {
    return std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          return apply(a, op, std::get<T>(rhs));
        },
        lhs);
  }
  const bool lnum = lhs.index() == 1 || lhs.index() == 2;
  const bool rnum = rhs.index() == 1 || rhs.index() == 2;
  if (!lnum || !rnum) return false;
  auto as_double = [](const Value& v) {
    return v.index() == 1 ? static_cast<double>(std::get<std::int64_t>(v)) : std::get<double>(v);
  };
  return apply(as_double(lhs), op, as_double(rhs));
}

}  // namespace xwacoda
