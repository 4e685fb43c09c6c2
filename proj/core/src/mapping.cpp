#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "xwacoda/etl.hpp"

namespace xwacoda::etl {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void mapping_error(const std::string& message) { throw Error(ErrorCode::MappingError, message); }

const ojson& member(const ojson& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) mapping_error(where + ": missing '" + key + "'");
  return j.at(key);
}

std::string as_string(const ojson& j, const std::string& where) {
  if (!j.is_string()) mapping_error(where + ": expected a string");
  return j.get<std::string>();
}

}  // namespace

MappingConfig parse_mapping(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::exception& e) {
    mapping_error(std::string("mapping file is not valid JSON: ") + e.what());
  }
  MappingConfig m;
  m.fact_class = as_string(member(j, "fact_class", "mapping"), "fact_class");
  if (j.contains("measures")) {
    const auto& measures = j.at("measures");
    if (!measures.is_object()) mapping_error("measures: expected an object");
    for (const auto& [measure, field] : measures.items())
      m.measures.push_back({measure, as_string(field, "measures." + measure)});
  }
  const auto& dims = member(j, "dimensions", "mapping");
  if (!dims.is_object()) mapping_error("dimensions: expected an object");
  for (const auto& [dim_id, spec] : dims.items()) {
    const std::string where = "dimensions." + dim_id;
    DimensionMapping dm;
    dm.dimension = dim_id;
    const auto& identity = member(spec, "identity", where);
    if (!identity.is_array()) mapping_error(where + ".identity: expected an array");
    for (const auto& id : identity) dm.identity.push_back(as_string(id, where + ".identity"));
    const auto& levels = member(spec, "levels", where);
    if (!levels.is_object()) mapping_error(where + ".levels: expected an object");
    for (const auto& [level_id, attrs] : levels.items()) {
      const std::string lwhere = where + ".levels." + level_id;
      if (!attrs.is_object()) mapping_error(lwhere + ": expected an object");
      LevelMapping lm;
      lm.level = level_id;
      for (const auto& [attr_id, source] : attrs.items()) {
        const std::string awhere = lwhere + "." + attr_id;
        AttributeSource as;
        as.attribute = attr_id;
        if (source.is_string()) {
          as.field = source.get<std::string>();
        } else {
          as.field = as_string(member(source, "field", awhere), awhere + ".field");
          const auto& buckets = member(source, "buckets", awhere);
          if (!buckets.is_array()) mapping_error(awhere + ".buckets: expected an array");
          for (const auto& b : buckets) {
            const auto& lo = member(b, "min", awhere + ".buckets");
            const auto& hi = member(b, "max", awhere + ".buckets");
            if (!lo.is_number() || !hi.is_number()) mapping_error(awhere + ".buckets: min and max must be numbers");
            as.buckets.push_back({lo.get<double>(), hi.get<double>(), as_string(member(b, "value", awhere + ".buckets"), awhere)});
          }
        }
        lm.attributes.push_back(std::move(as));
      }
      dm.levels.push_back(std::move(lm));
    }
    m.dimensions.push_back(std::move(dm));
  }
  return m;
}

std::string serialize_mapping(const MappingConfig& m) {
  ojson j;
  j["fact_class"] = m.fact_class;
  j["measures"] = ojson::object();
  for (const auto& ms : m.measures) j["measures"][ms.measure] = ms.field;
  j["dimensions"] = ojson::object();
  for (const auto& dm : m.dimensions) {
    ojson d;
    d["identity"] = dm.identity;
    d["levels"] = ojson::object();
    for (const auto& lm : dm.levels) {
      ojson l = ojson::object();
      for (const auto& as : lm.attributes) {
        if (as.buckets.empty()) {
          l[as.attribute] = as.field;
        } else {
          ojson buckets = ojson::array();
          for (const auto& b : as.buckets) buckets.push_back({{"min", b.min}, {"max", b.max}, {"value", b.value}});
          l[as.attribute] = {{"field", as.field}, {"buckets", buckets}};
        }
      }
      d["levels"][lm.level] = l;
    }
    j["dimensions"][dm.dimension] = d;
  }
  return j.dump(2) + "\n";
}

void validate_mapping(const MappingConfig& mapping, std::span<const std::string> header, const WarehouseModel& model) {
  const auto* fc = model.find_fact_class(mapping.fact_class);
  if (!fc) mapping_error("unknown fact class '" + mapping.fact_class + "'");
  auto check_field = [&](const std::string& field, const std::string& where) {
    if (header.empty()) return;
    if (std::find(header.begin(), header.end(), field) == header.end())
      mapping_error(where + " names unknown source field '" + field + "'");
  };

  std::set<std::string> measures_seen;
  for (const auto& ms : mapping.measures) {
    if (!fc->find_measure(ms.measure)) mapping_error("fact class " + fc->id + " has no measure '" + ms.measure + "'");
    if (!measures_seen.insert(ms.measure).second) mapping_error("measure '" + ms.measure + "' mapped twice");
    check_field(ms.field, "measure " + ms.measure);
  }

  std::set<std::string> dims_seen;
  for (const auto& dm : mapping.dimensions) {
    if (!fc->dimension_ref_index(dm.dimension))
      mapping_error("fact class " + fc->id + " does not reference dimension '" + dm.dimension + "'");
    if (!dims_seen.insert(dm.dimension).second) mapping_error("dimension '" + dm.dimension + "' mapped twice");
    const auto* dim = model.find_dimension(dm.dimension);
    std::set<std::string> levels_seen;
    for (const auto& lm : dm.levels) {
      const auto* level = dim->find_level(lm.level);
      if (!level) mapping_error("dimension " + dm.dimension + " has no level '" + lm.level + "'");
      if (!levels_seen.insert(lm.level).second) mapping_error("level " + dm.dimension + "." + lm.level + " mapped twice");
      if (lm.attributes.empty()) mapping_error("level " + dm.dimension + "." + lm.level + " maps no attribute");
      for (const auto& as : lm.attributes) {
        const std::string where = dm.dimension + "." + lm.level + "." + as.attribute;
        const auto* attr = level->find_attribute(as.attribute);
        if (!attr) mapping_error("level " + dm.dimension + "." + lm.level + " has no attribute '" + as.attribute + "'");
        check_field(as.field, "attribute " + where);
        auto buckets = as.buckets;
        std::sort(buckets.begin(), buckets.end(), [](const Bucket& a, const Bucket& b) { return a.min < b.min; });
        for (std::size_t i = 0; i < buckets.size(); ++i) {
          if (buckets[i].min > buckets[i].max) mapping_error("bucket '" + buckets[i].value + "' of " + where + " has min > max");
          if (i > 0 && buckets[i].min <= buckets[i - 1].max)
            mapping_error("buckets '" + buckets[i - 1].value + "' and '" + buckets[i].value + "' of " + where + " overlap");
          if (!parse_value(buckets[i].value, attr->value_type))
            mapping_error("bucket value '" + buckets[i].value + "' is not a valid " + std::string(to_string(attr->value_type)));
        }
      }
    }
    for (const auto& level : dim->levels) {
      if (!levels_seen.count(level.id))
        mapping_error("dimension " + dm.dimension + " does not map level '" + level.id + "'");
    }
    if (dm.identity.empty()) mapping_error("dimension " + dm.dimension + " declares no identity field");
    for (const auto& field : dm.identity) check_field(field, "identity of " + dm.dimension);
  }
  for (const auto& ref : fc->dimension_refs)
    if (!dims_seen.count(ref)) mapping_error("no mapping for dimension '" + ref + "'");
}

AttributeTree goal_tree(const MappingConfig& mapping) {
  AttributeTree tree;
  tree.root = AttributeNode{mapping.fact_class, NodeKind::Root, std::nullopt, {}};
  for (const auto& ms : mapping.measures)
    tree.root.children.push_back({ms.field, NodeKind::Attribute, std::nullopt, {}});
  for (const auto& dm : mapping.dimensions) {
    AttributeNode entity{dm.dimension, NodeKind::Entity, std::nullopt, {}};
    std::set<std::string> fields;
    for (const auto& field : dm.identity)
      if (fields.insert(field).second) entity.children.push_back({field, NodeKind::Attribute, std::nullopt, {}});
    for (const auto& lm : dm.levels)
      for (const auto& as : lm.attributes)
        if (fields.insert(as.field).second) entity.children.push_back({as.field, NodeKind::Attribute, std::nullopt, {}});
    tree.root.children.push_back(std::move(entity));
  }
  return tree;
}

std::string member_id(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%06zu", ordinal);
  return buf;
}

namespace {

struct LevelPlan {
  std::size_t level;
  std::vector<std::pair<std::size_t, const AttributeSource*>> attrs;  // attribute index -> source
  std::vector<std::size_t> identity;  // attrs entries forming the key (coarser levels)
  std::vector<std::size_t> fields;    // source field per attrs entry
};

struct DimensionState {
  const DimensionDef* def;
  std::size_t slot;
  std::vector<LevelPlan> levels;
  std::vector<std::size_t> identity_fields;
  std::vector<DimensionMember> members;
  std::vector<std::size_t> member_level;
  std::vector<std::map<std::vector<std::string>, std::size_t>> seen;
};

std::optional<Value> cell_value(const std::string& cell, const AttributeSource& src, ValueType type,
                                std::size_t row, const std::string& where) {
  if (!src.buckets.empty()) {
    if (cell.empty()) return std::nullopt;
    auto v = parse_double(cell);
    if (!v) throw Error(ErrorCode::TypeError, "row " + std::to_string(row) + ", " + where + ": '" + cell + "' is not numeric");
    for (const auto& b : src.buckets)
      if (*v >= b.min && *v <= b.max) return parse_value(b.value, type);
    mapping_error("row " + std::to_string(row) + ", " + where + ": value " + cell + " falls in no bucket");
  }
  if (cell.empty() && type != ValueType::String) return std::nullopt;
  auto v = parse_value(cell, type);
  if (!v) {
    throw Error(ErrorCode::TypeError, "row " + std::to_string(row) + ", " + where + ": '" + cell +
                                          "' is not a valid " + std::string(to_string(type)));
  }
  return v;
}

}  // namespace

WarehouseContents build_warehouse(const SourceRecordSet& records, const MappingConfig& mapping,
                                  const WarehouseModel& model) {
  validate_mapping(mapping, records.header, model);
  const auto* fc = model.find_fact_class(mapping.fact_class);

  std::vector<std::pair<std::size_t, std::size_t>> measure_fields;  // measure index, field index
  for (const auto& ms : mapping.measures)
    measure_fields.emplace_back(*fc->measure_index(ms.measure), records.field_index(ms.field).value_or(0));

  std::vector<DimensionState> dims;
  for (const auto& dm : mapping.dimensions) {
    DimensionState st;
    st.def = model.find_dimension(dm.dimension);
    st.slot = *fc->dimension_ref_index(dm.dimension);
    for (std::size_t l = 0; l < st.def->levels.size(); ++l) {
      const auto& level = st.def->levels[l];
      const auto& lm = *std::find_if(dm.levels.begin(), dm.levels.end(),
                                     [&](const LevelMapping& x) { return x.level == level.id; });
      LevelPlan plan;
      plan.level = l;
      for (const auto& as : lm.attributes) {
        plan.attrs.emplace_back(*level.attribute_index(as.attribute), &as);
        plan.fields.push_back(records.field_index(as.field).value_or(0));
      }
      for (std::size_t k = 0; k < plan.attrs.size(); ++k) plan.identity.push_back(k);
      st.levels.push_back(std::move(plan));
    }
    for (const auto& field : dm.identity) st.identity_fields.push_back(records.field_index(field).value_or(0));
    st.seen.resize(st.def->levels.size());
    dims.push_back(std::move(st));
  }

  WarehouseContents contents;
  contents.model = model;
  contents.facts.resize(model.fact_classes.size());
  contents.members.resize(model.dimensions.size());
  auto& facts = contents.facts[static_cast<std::size_t>(fc - model.fact_classes.data())];

  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    const auto& row = records.rows[r];
    const std::size_t row_no = r + 2;  // header is line 1
    FactRecord fact;
    fact.fact_class = fc->id;
    fact.id = "f" + std::to_string(r + 1);
    fact.measures.assign(fc->measures.size(), std::nullopt);
    fact.dim_refs.assign(fc->dimension_refs.size(), std::string());
    for (const auto& [m, field] : measure_fields) {
      const auto& cell = row[field];
      if (cell.empty()) continue;
      const auto& def = fc->measures[m];
      std::optional<double> v;
      if (def.value_type == ValueType::Integer) {
        if (auto i = parse_int64(cell)) v = static_cast<double>(*i);
      } else {
        v = parse_double(cell);
      }
      if (!v) {
        throw Error(ErrorCode::TypeError, "row " + std::to_string(row_no) + ", measure " + def.id + ": '" + cell +
                                              "' is not a valid " + std::string(to_string(def.value_type)));
      }
      fact.measures[m] = v;
    }

    for (auto& st : dims) {
      // Evaluate every level so bucket coverage and types are checked on all rows.
      std::vector<std::vector<std::optional<Value>>> values;
      for (const auto& plan : st.levels) {
        const auto& level = st.def->levels[plan.level];
        std::vector<std::optional<Value>> attrs(level.attributes.size());
        for (std::size_t k = 0; k < plan.attrs.size(); ++k) {
          const auto [a, src] = plan.attrs[k];
          attrs[a] = cell_value(row[plan.fields[k]], *src, level.attributes[a].value_type, row_no,
                                st.def->id + "." + level.id + "." + src->attribute);
        }
        values.push_back(std::move(attrs));
      }

      std::optional<std::size_t> below;  // newly created member one level down
      for (std::size_t l = 0; l < st.levels.size(); ++l) {
        const auto& plan = st.levels[l];
        std::vector<std::string> key;
        if (l == 0) {
          for (std::size_t f : st.identity_fields) key.push_back(row[f]);
        } else {
          for (std::size_t k : plan.identity) {
            const auto& v = values[l][plan.attrs[k].first];
            key.push_back(v ? format_value(*v) : std::string());
          }
        }
        auto [it, created] = st.seen[l].try_emplace(std::move(key), st.members.size());
        if (created) {
          DimensionMember m;
          m.dimension = st.def->id;
          m.level = st.def->levels[l].id;
          m.id = member_id(st.members.size() + 1);
          m.attributes = values[l];
          st.members.push_back(std::move(m));
          st.member_level.push_back(l);
        }
        const std::size_t idx = it->second;
        if (l == 0) fact.dim_refs[st.slot] = st.members[idx].id;
        if (below) {
          st.members[*below].roll_up.push_back(st.members[idx].id);
          st.members[idx].drill_down.push_back(st.members[*below].id);
        }
        if (!created) break;
        below = idx;
      }
    }
    facts.push_back(std::move(fact));
  }

  for (auto& st : dims) {
    std::vector<std::size_t> order(st.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return st.member_level[a] < st.member_level[b]; });
    auto& out = contents.members[static_cast<std::size_t>(st.def - model.dimensions.data())];
    for (std::size_t i : order) out.push_back(std::move(st.members[i]));
  }
  return contents;
}

std::map<std::string, std::string> generate_warehouse(const SourceRecordSet& records, const MappingConfig& mapping,
                                                      const WarehouseModel& model) {
  return serialize_warehouse_documents(build_warehouse(records, mapping, model));
}

}  // namespace xwacoda::etl
