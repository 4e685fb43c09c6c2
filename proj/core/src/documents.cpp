#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "xml_sax.hpp"
#include "xwacoda/store.hpp"

namespace xwacoda {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

std::optional<std::string_view> find_attr(const detail::XmlAttributes& attrs, std::string_view name) {
  for (const auto& [k, v] : attrs)
    if (k == name) return v;
  return std::nullopt;
}

void expect_only(const detail::XmlAttributes& attrs, std::string_view element,
                 std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : attrs) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      fail(ErrorCode::SchemaViolation, "unexpected attribute '" + std::string(k) + "' on " + std::string(element));
  }
}

std::string_view required(const detail::XmlAttributes& attrs, std::string_view element, std::string_view name) {
  auto v = find_attr(attrs, name);
  if (!v) {
    fail(ErrorCode::SchemaViolation,
         std::string(element) + " lacks required attribute '" + std::string(name) + "'");
  }
  return *v;
}

void reject_text(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") != std::string_view::npos)
    fail(ErrorCode::SchemaViolation, "unexpected character data '" + std::string(text) + "'");
}

std::vector<std::string> split_ids(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ' ';
    out += id;
  }
  return out;
}

double parse_measure(std::string_view text, const AttributeDef& def, std::string_view where) {
  if (def.value_type == ValueType::Integer) {
    if (auto v = parse_int64(text)) return static_cast<double>(*v);
  } else if (auto v = parse_double(text)) {
    return *v;
  }
  fail(ErrorCode::TypeError, "measure " + def.id + " of " + std::string(where) + ": '" + std::string(text) +
                                 "' is not a valid " + std::string(to_string(def.value_type)));
}

std::string format_measure(double value, const AttributeDef& def) {
  if (def.value_type == ValueType::Integer) return std::to_string(static_cast<std::int64_t>(std::llround(value)));
  return format_double(value);
}

std::string fact_label(const FactRecord& f, std::size_t ordinal) {
  return f.id.empty() ? "#" + std::to_string(ordinal + 1) : f.id;
}

}  // namespace

std::vector<FactRecord> parse_fact_document(std::string_view document, const FactClassDef& fact_class) {
  std::vector<FactRecord> facts;
  int depth = 0;
  std::vector<std::uint8_t> seen_measure;
  std::vector<std::uint8_t> seen_dim;

  detail::SaxHandlers h;
  h.start = [&](std::string_view name, const detail::XmlAttributes& attrs) {
    ++depth;
    if (depth == 1) {
      if (name != "FactDoc") fail(ErrorCode::SchemaViolation, "fact document root must be FactDoc, got " + std::string(name));
      return;
    }
    if (depth == 2) {
      if (name != "fact") fail(ErrorCode::SchemaViolation, "unexpected element '" + std::string(name) + "' under FactDoc");
      expect_only(attrs, name, {"id"});
      FactRecord f;
      f.fact_class = fact_class.id;
      if (auto id = find_attr(attrs, "id")) f.id = std::string(*id);
      f.measures.assign(fact_class.measures.size(), std::nullopt);
      f.dim_refs.assign(fact_class.dimension_refs.size(), std::string());
      facts.push_back(std::move(f));
      seen_measure.assign(fact_class.measures.size(), 0);
      seen_dim.assign(fact_class.dimension_refs.size(), 0);
      return;
    }
    if (depth > 3) fail(ErrorCode::SchemaViolation, "unexpected nested element '" + std::string(name) + "'");
    auto& f = facts.back();
    const std::string where = fact_label(f, facts.size() - 1);
    if (name == "measure") {
      expect_only(attrs, name, {"mes-id", "value"});
      const auto mes_id = required(attrs, name, "mes-id");
      const auto value = required(attrs, name, "value");
      auto idx = fact_class.measure_index(mes_id);
      if (!idx) fail(ErrorCode::UnknownMeasureId, "fact " + where + " names unknown measure '" + std::string(mes_id) + "'");
      if (seen_measure[*idx]) fail(ErrorCode::DuplicateMeasureInFact, "fact " + where + " repeats measure '" + std::string(mes_id) + "'");
      seen_measure[*idx] = 1;
      f.measures[*idx] = parse_measure(value, fact_class.measures[*idx], where);
    } else if (name == "dimension") {
      expect_only(attrs, name, {"dim-id", "value-id"});
      const auto dim_id = required(attrs, name, "dim-id");
      const auto value_id = required(attrs, name, "value-id");
      auto idx = fact_class.dimension_ref_index(dim_id);
      if (!idx) fail(ErrorCode::UnknownDimensionId, "fact " + where + " references unknown dimension '" + std::string(dim_id) + "'");
      if (seen_dim[*idx]) fail(ErrorCode::SchemaViolation, "fact " + where + " references dimension '" + std::string(dim_id) + "' twice");
      seen_dim[*idx] = 1;
      f.dim_refs[*idx] = std::string(value_id);
    } else {
      fail(ErrorCode::SchemaViolation, "unexpected element '" + std::string(name) + "' in fact");
    }
  };
  h.end = [&](std::string_view name) {
    if (depth == 2) {
      for (std::size_t i = 0; i < seen_dim.size(); ++i) {
        if (!seen_dim[i]) {
          fail(ErrorCode::MissingDimensionRef, "fact " + fact_label(facts.back(), facts.size() - 1) +
                                                   " lacks a reference to dimension '" + fact_class.dimension_refs[i] + "'");
        }
      }
    }
    (void)name;
    --depth;
  };
  h.text = reject_text;
  detail::sax_parse(document, h);
  return facts;
}

std::vector<DimensionMember> parse_dimension_document(std::string_view document, const DimensionDef& dim) {
  std::vector<DimensionMember> members;
  std::set<std::string, std::less<>> ids;
  int depth = 0;
  std::optional<std::size_t> level;
  std::vector<std::uint8_t> seen_attr;

  detail::SaxHandlers h;
  h.start = [&](std::string_view name, const detail::XmlAttributes& attrs) {
    ++depth;
    if (depth == 1) {
      if (name != "dimension") fail(ErrorCode::SchemaViolation, "dimension document root must be dimension, got " + std::string(name));
      expect_only(attrs, name, {"dim-id"});
      const auto dim_id = required(attrs, name, "dim-id");
      if (dim_id != dim.id) {
        fail(ErrorCode::UnknownDimensionId,
             "document describes dimension '" + std::string(dim_id) + "', expected '" + dim.id + "'");
      }
      return;
    }
    if (depth == 2) {
      if (name != "Level") fail(ErrorCode::SchemaViolation, "unexpected element '" + std::string(name) + "' under dimension");
      expect_only(attrs, name, {"id"});
      const auto level_id = required(attrs, name, "id");
      level = dim.level_index(level_id);
      if (!level) fail(ErrorCode::UnknownLevelId, "dimension " + dim.id + " has no level '" + std::string(level_id) + "'");
      return;
    }
    if (depth == 3) {
      if (name != "instance") fail(ErrorCode::SchemaViolation, "unexpected element '" + std::string(name) + "' in Level");
      expect_only(attrs, name, {"id", "Roll-up", "Drill-Down"});
      const auto id = required(attrs, name, "id");
      if (!ids.insert(std::string(id)).second)
        fail(ErrorCode::DuplicateMemberId, "dimension " + dim.id + " repeats member id '" + std::string(id) + "'");
      const auto& level_def = dim.levels[*level];
      DimensionMember m;
      m.dimension = dim.id;
      m.level = level_def.id;
      m.id = std::string(id);
      m.attributes.assign(level_def.attributes.size(), std::nullopt);
      if (auto r = find_attr(attrs, "Roll-up")) m.roll_up = split_ids(*r);
      if (auto d = find_attr(attrs, "Drill-Down")) m.drill_down = split_ids(*d);
      members.push_back(std::move(m));
      seen_attr.assign(level_def.attributes.size(), 0);
      return;
    }
    if (depth == 4 && name == "attribute") {
      expect_only(attrs, name, {"id", "value"});
      const auto attr_id = required(attrs, name, "id");
      const auto value = required(attrs, name, "value");
      const auto& level_def = dim.levels[*level];
      auto& m = members.back();
      auto idx = level_def.attribute_index(attr_id);
      if (!idx) {
        fail(ErrorCode::UnknownAttributeId,
             "member " + m.id + " of level " + level_def.id + " names unknown attribute '" + std::string(attr_id) + "'");
      }
      if (seen_attr[*idx]) fail(ErrorCode::SchemaViolation, "member " + m.id + " repeats attribute '" + std::string(attr_id) + "'");
      seen_attr[*idx] = 1;
      auto parsed = parse_value(value, level_def.attributes[*idx].value_type);
      if (!parsed) {
        fail(ErrorCode::TypeError, "attribute " + std::string(attr_id) + " of member " + m.id + ": '" + std::string(value) +
                                       "' is not a valid " + std::string(to_string(level_def.attributes[*idx].value_type)));
      }
      m.attributes[*idx] = std::move(*parsed);
      return;
    }
    fail(ErrorCode::SchemaViolation, "unexpected element '" + std::string(name) + "' in dimension document");
  };
  h.end = [&](std::string_view) { --depth; };
  h.text = reject_text;
  detail::sax_parse(document, h);
  return members;
}

std::string serialize_fact_document(std::span<const FactRecord> facts, const FactClassDef& fact_class) {
  using detail::escape_xml;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<FactDoc>\n";
  for (const auto& f : facts) {
    out += f.id.empty() ? "  <fact>\n" : "  <fact id=\"" + escape_xml(f.id) + "\">\n";
    for (std::size_t i = 0; i < fact_class.measures.size() && i < f.measures.size(); ++i) {
      if (!f.measures[i]) continue;
      out += "    <measure mes-id=\"" + escape_xml(fact_class.measures[i].id) + "\" value=\"" +
             format_measure(*f.measures[i], fact_class.measures[i]) + "\"/>\n";
    }
    for (std::size_t i = 0; i < fact_class.dimension_refs.size() && i < f.dim_refs.size(); ++i) {
      out += "    <dimension dim-id=\"" + escape_xml(fact_class.dimension_refs[i]) + "\" value-id=\"" +
             escape_xml(f.dim_refs[i]) + "\"/>\n";
    }
    out += "  </fact>\n";
  }
  out += "</FactDoc>\n";
  return out;
}

std::string serialize_dimension_document(std::span<const DimensionMember> members, const DimensionDef& dim) {
  using detail::escape_xml;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dimension dim-id=\"" + escape_xml(dim.id) + "\">\n";
  const std::string* open_level = nullptr;
  for (const auto& m : members) {
    if (!open_level || *open_level != m.level) {
      if (open_level) out += "  </Level>\n";
      out += "  <Level id=\"" + escape_xml(m.level) + "\">\n";
      open_level = &m.level;
    }
    out += "    <instance id=\"" + escape_xml(m.id) + "\" Roll-up=\"" + escape_xml(join_ids(m.roll_up)) +
           "\" Drill-Down=\"" + escape_xml(join_ids(m.drill_down)) + "\"";
    const LevelDef* level = dim.find_level(m.level);
    bool any = false;
    for (std::size_t i = 0; level && i < level->attributes.size() && i < m.attributes.size(); ++i) {
      if (!m.attributes[i]) continue;
      if (!any) out += ">\n";
      any = true;
      out += "      <attribute id=\"" + escape_xml(level->attributes[i].id) + "\" value=\"" +
             escape_xml(format_value(*m.attributes[i])) + "\"/>\n";
    }
    out += any ? "    </instance>\n" : "/>\n";
  }
  if (open_level) out += "  </Level>\n";
  out += "</dimension>\n";
  return out;
}

}  // namespace xwacoda
