#include <algorithm>
#include <cctype>

#include "xwacoda/query.hpp"

namespace xwacoda {

std::string_view to_string(AggregateFunction fn) {
  switch (fn) {
    case AggregateFunction::Sum: return "sum";
    case AggregateFunction::Count: return "count";
    case AggregateFunction::Avg: return "avg";
    case AggregateFunction::Min: return "min";
    case AggregateFunction::Max: return "max";
  }
  return "count";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::optional<AggregateFunction> parse_aggregate_function(std::string_view text) {
  const auto t = lower(text);
  if (t == "sum") return AggregateFunction::Sum;
  if (t == "count") return AggregateFunction::Count;
  if (t == "avg") return AggregateFunction::Avg;
  if (t == "min") return AggregateFunction::Min;
  if (t == "max") return AggregateFunction::Max;
  return std::nullopt;
}

std::string AggregateSpec::label() const {
  return std::string(to_string(function)) + "(" + measure + ")";
}

namespace {

enum class Tok { Ident, Keyword, Number, String, Dot, Comma, LParen, RParen, Star, Op, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool is_keyword(std::string_view word) {
  static constexpr std::string_view kKeywords[] = {"from", "where", "and", "group", "by", "select"};
  const auto w = lower(word);
  return std::find(std::begin(kKeywords), std::end(kKeywords), w) != std::end(kKeywords);
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      const auto word = s.substr(start, i - start);
      out.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, std::string(word), start});
    } else if (digit(c) || ((c == '-' || c == '.') && i + 1 < s.size() && (digit(s[i + 1]) || s[i + 1] == '.'))) {
      if (c == '-') ++i;
      while (i < s.size() && digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && digit(s[j])) {
          i = j;
          while (i < s.size() && digit(s[i])) ++i;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
    } else if (c == '\'' || c == '"') {
      const auto close = s.find(c, i + 1);
      if (close == std::string_view::npos) throw SyntaxError(start, "unterminated string literal");
      out.push_back({Tok::String, std::string(s.substr(i + 1, close - i - 1)), start});
      i = close + 1;
    } else if (c == '.') {
      out.push_back({Tok::Dot, ".", i++});
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", i++});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (c == '*') {
      out.push_back({Tok::Star, "*", i++});
    } else if (c == '=' || c == '<' || c == '>' || c == '!') {
      std::string op(1, c);
      ++i;
      if (i < s.size() && (s[i] == '=' || (c == '<' && s[i] == '>'))) op += s[i++];
      if (op == "!") throw SyntaxError(start, "expected '!='");
      out.push_back({Tok::Op, op, start});
    } else {
      throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  AnalyticQuery parse() {
    AnalyticQuery q;
    keyword("from");
    q.fact_class = ident("fact class");
    if (at_keyword("where")) {
      next();
      q.predicates.push_back(predicate());
      while (at_keyword("and")) {
        next();
        q.predicates.push_back(predicate());
      }
    }
    if (at_keyword("group")) {
      next();
      keyword("by");
      q.group_by.push_back(group_key());
      while (peek().kind == Tok::Comma) {
        next();
        q.group_by.push_back(group_key());
      }
    }
    keyword("select");
    q.aggregates.push_back(aggregate());
    while (peek().kind == Tok::Comma) {
      next();
      q.aggregates.push_back(aggregate());
    }
    if (peek().kind != Tok::End) error("unexpected '" + peek().text + "' after SELECT list");
    return q;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  [[noreturn]] void error(const std::string& message) const { throw SyntaxError(peek().pos, message); }

  std::string describe() const { return peek().kind == Tok::End ? "end of query" : "'" + peek().text + "'"; }

  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Keyword && lower(peek().text) == kw; }

  void keyword(std::string_view kw) {
    if (!at_keyword(kw)) error("expected " + lower_to_upper(kw) + ", found " + describe());
    next();
  }

  static std::string lower_to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) error(std::string("expected ") + what + ", found " + describe());
    return next().text;
  }

  /// Path segment after a '.'; reserved words are ordinary names here.
  std::string segment(const char* what) {
    if (peek().kind != Tok::Ident && peek().kind != Tok::Keyword)
      error(std::string("expected ") + what + ", found " + describe());
    return next().text;
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) error(std::string("expected ") + what + ", found " + describe());
    next();
  }

  Predicate predicate() {
    Predicate p;
    p.dimension = ident("dimension");
    expect(Tok::Dot, "'.'");
    p.level = segment("level");
    expect(Tok::Dot, "'.'");
    p.attribute = segment("attribute");
    if (peek().kind != Tok::Op) error("expected comparison operator, found " + describe());
    const auto op = next().text;
    if (op == "=") p.comparator = Comparator::Eq;
    else if (op == "!=" || op == "<>") p.comparator = Comparator::Ne;
    else if (op == "<") p.comparator = Comparator::Lt;
    else if (op == "<=") p.comparator = Comparator::Le;
    else if (op == ">") p.comparator = Comparator::Gt;
    else if (op == ">=") p.comparator = Comparator::Ge;
    else error("unknown operator '" + op + "'");
    p.literal = literal();
    return p;
  }

  Value literal() {
    const Token& t = peek();
    if (t.kind == Tok::String) {
      next();
      return Value{t.text};
    }
    if (t.kind == Tok::Number) {
      const bool decimal = t.text.find_first_of(".eE") != std::string::npos;
      if (!decimal) {
        if (auto v = parse_int64(t.text)) {
          next();
          return Value{*v};
        }
      } else if (auto v = parse_double(t.text)) {
        next();
        return Value{*v};
      }
      error("invalid numeric literal '" + t.text + "'");
    }
    error("expected literal, found " + describe());
  }

  GroupKey group_key() {
    GroupKey k;
    k.dimension = ident("dimension");
    expect(Tok::Dot, "'.'");
    k.level = segment("level");
    return k;
  }

  AggregateSpec aggregate() {
    if (peek().kind != Tok::Ident) error("expected aggregate function, found " + describe());
    auto fn = parse_aggregate_function(peek().text);
    if (!fn) error("unknown aggregate function '" + peek().text + "'");
    next();
    AggregateSpec a;
    a.function = *fn;
    expect(Tok::LParen, "'('");
    if (peek().kind == Tok::Star) {
      if (a.function != AggregateFunction::Count) error("only count accepts '*'");
      next();
      a.measure = std::string(kStar);
    } else {
      a.measure = ident("measure");
    }
    expect(Tok::RParen, "')'");
    return a;
  }
};

std::string format_literal(const Value& v) {
  switch (v.index()) {
    case 0: {
      const auto& s = std::get<std::string>(v);
      return s.find('\'') == std::string::npos ? "'" + s + "'" : "\"" + s + "\"";
    }
    case 2: {
      auto text = format_double(std::get<double>(v));
      if (text.find_first_of(".eE") == std::string::npos) text += ".0";
      return text;
    }
    case 3: return "'" + format_value(v) + "'";
    default: return format_value(v);
  }
}

}  // namespace

AnalyticQuery parse_query(std::string_view text) { return Parser(text).parse(); }

std::string format_query(const AnalyticQuery& q) {
  std::string out = "FROM " + q.fact_class;
  for (std::size_t i = 0; i < q.predicates.size(); ++i) {
    const auto& p = q.predicates[i];
    out += i == 0 ? " WHERE " : " AND ";
    out += p.dimension + "." + p.level + "." + p.attribute + " " + std::string(to_string(p.comparator)) + " " +
           format_literal(p.literal);
  }
  for (std::size_t i = 0; i < q.group_by.size(); ++i) {
    out += i == 0 ? " GROUP BY " : ", ";
    out += q.group_by[i].dimension + "." + q.group_by[i].level;
  }
  for (std::size_t i = 0; i < q.aggregates.size(); ++i) {
    out += i == 0 ? " SELECT " : ", ";
    out += q.aggregates[i].label();
  }
  return out;
}

}  // namespace xwacoda
