#include "xwacoda/api.hpp"

#include <json.hpp>

namespace xwacoda::api {

using nlohmann::json;

namespace {

Response error_response(int status, std::string_view code, const std::string& message,
                        std::optional<std::size_t> position = std::nullopt) {
  json err = {{"code", code}, {"message", message}};
  if (position) err["position"] = *position;
  return Response{status, json{{"error", err}}.dump()};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return 400;
    case ErrorCode::ValidationError:
    case ErrorCode::NonStrictHierarchy:
    case ErrorCode::AlreadyCoarsest:
    case ErrorCode::AlreadyFinest:
    case ErrorCode::UnknownAxisMember:
    case ErrorCode::UnknownDimensionId:
    case ErrorCode::TypeError: return 422;
    default: return 500;
  }
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const SyntaxError& e) {
    return error_response(400, error_code_name(e.code()), e.what(), e.position());
  } catch (const Error& e) {
    return error_response(status_for(e.code()), error_code_name(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "BAD_REQUEST", std::string("malformed request body: ") + e.what());
  }
}

json value_json(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<std::string>(v);
    case 1: return std::get<std::int64_t>(v);
    case 2: return std::get<double>(v);
    default: return format_value(v);
  }
}

Value json_value(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  throw Error(ErrorCode::ValidationError, "predicate value must be a string or a number");
}

Comparator parse_comparator(const std::string& op) {
  if (op == "=" || op == "eq") return Comparator::Eq;
  if (op == "!=" || op == "<>" || op == "ne") return Comparator::Ne;
  if (op == "<" || op == "lt") return Comparator::Lt;
  if (op == "<=" || op == "le") return Comparator::Le;
  if (op == ">" || op == "gt") return Comparator::Gt;
  if (op == ">=" || op == "ge") return Comparator::Ge;
  throw Error(ErrorCode::ValidationError, "unknown comparator '" + op + "'");
}

std::string_view type_name(ColumnType t) {
  switch (t) {
    case ColumnType::String: return "string";
    case ColumnType::Integer: return "integer";
    case ColumnType::Decimal: return "decimal";
    case ColumnType::Date: return "date";
  }
  return "string";
}

std::string_view role_name(ColumnRole r) {
  switch (r) {
    case ColumnRole::GroupMember: return "group";
    case ColumnRole::GroupAttribute: return "attribute";
    case ColumnRole::Aggregate: return "aggregate";
  }
  return "aggregate";
}

json cell_json(const Cell& c) {
  switch (c.index()) {
    case 0: return nullptr;
    case 1: return std::get<std::string>(c);
    case 2: return std::get<std::int64_t>(c);
    default: return std::get<double>(c);
  }
}

const std::string& required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw Error(ErrorCode::ValidationError, std::string("missing string field '") + key + "'");
  return j.at(key).get_ref<const std::string&>();
}

json spec_to_json(const CubeSpec& spec) {
  json axes = json::array();
  for (const auto& a : spec.axes) axes.push_back({{"dimension", a.dimension}, {"level", a.level}});
  json preds = json::array();
  for (const auto& p : spec.predicates) {
    preds.push_back({{"dimension", p.dimension},
                     {"level", p.level},
                     {"attribute", p.attribute},
                     {"op", to_string(p.comparator)},
                     {"value", value_json(p.literal)}});
  }
  json filters = json::array();
  for (const auto& f : spec.filters)
    filters.push_back({{"dimension", f.dimension}, {"level", f.level}, {"members", f.members}});
  return {{"fact_class", spec.fact_class},
          {"axes", axes},
          {"measure", spec.measure},
          {"aggregate", to_string(spec.aggregate)},
          {"predicates", preds},
          {"filters", filters}};
}

CubeSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ValidationError, "cube spec must be an object");
  CubeSpec spec;
  spec.fact_class = required_string(j, "fact_class");
  if (!j.contains("axes") || !j.at("axes").is_array()) throw Error(ErrorCode::ValidationError, "missing array field 'axes'");
  for (const auto& a : j.at("axes")) spec.axes.push_back({required_string(a, "dimension"), required_string(a, "level")});
  spec.measure = j.value("measure", std::string(kStar));
  const auto agg = j.value("aggregate", std::string("count"));
  auto fn = parse_aggregate_function(agg);
  if (!fn) throw Error(ErrorCode::ValidationError, "unknown aggregate '" + agg + "'");
  spec.aggregate = *fn;
  if (j.contains("predicates")) {
    for (const auto& p : j.at("predicates")) {
      if (!p.contains("value")) throw Error(ErrorCode::ValidationError, "predicate lacks 'value'");
      spec.predicates.push_back({required_string(p, "dimension"), required_string(p, "level"),
                                 required_string(p, "attribute"), parse_comparator(p.value("op", std::string("="))),
                                 json_value(p.at("value"))});
    }
  }
  if (j.contains("filters")) {
    for (const auto& f : j.at("filters")) {
      MemberFilter mf{required_string(f, "dimension"), required_string(f, "level"), {}};
      if (f.contains("members")) mf.members = f.at("members").get<std::vector<std::string>>();
      spec.filters.push_back(std::move(mf));
    }
  }
  return spec;
}

}  // namespace

std::string model_json(const WarehouseStore& store) {
  const auto& model = store.model();
  json dims = json::array();
  for (const auto& d : model.dimensions) {
    json levels = json::array();
    for (const auto& l : d.levels) {
      json attrs = json::array();
      for (const auto& a : l.attributes) attrs.push_back({{"id", a.id}, {"type", to_string(a.value_type)}});
      levels.push_back({{"id", l.id}, {"attributes", attrs}});
    }
    dims.push_back({{"id", d.id},
                    {"path", d.document_path},
                    {"levels", levels},
                    {"members", store.dimension(d.id).members().size()}});
  }
  json facts = json::array();
  for (const auto& f : model.fact_classes) {
    json measures = json::array();
    for (const auto& m : f.measures) measures.push_back({{"id", m.id}, {"type", to_string(m.value_type)}});
    facts.push_back({{"id", f.id},
                     {"path", f.document_path},
                     {"measures", measures},
                     {"dimensions", f.dimension_refs},
                     {"facts", store.facts(f.id).size()}});
  }
  return json{{"dimensions", dims},
              {"fact_classes", facts},
              {"fact_count", store.fact_count()},
              {"member_count", store.member_count()}}
      .dump();
}

std::string result_table_json(const ResultTable& table) {
  json cols = json::array();
  for (const auto& c : table.columns)
    cols.push_back({{"name", c.name}, {"role", role_name(c.role)}, {"type", type_name(c.type)}});
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row = json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rows.push_back(std::move(row));
  }
  return json{{"columns", cols}, {"rows", rows}}.dump();
}

std::string cube_json(const Cube& cube, const WarehouseModel& model) {
  auto number = [&](std::optional<double> v) -> json {
    if (!v) return nullptr;
    if (cube.integral()) return static_cast<std::int64_t>(std::llround(*v));
    return *v;
  };
  json axes = json::array();
  for (const auto& a : cube.axes()) {
    const auto* dim = model.find_dimension(a.dimension);
    const auto level = dim ? dim->level_index(a.level).value_or(0) : 0;
    const auto count = dim ? dim->levels.size() : 1;
    axes.push_back({{"dimension", a.dimension},
                    {"level", a.level},
                    {"members", a.members},
                    {"can_roll_up", level + 1 < count},
                    {"can_drill_down", level > 0}});
  }
  json cells = json::array();
  for (const auto& [coord, cell] : cube.cells())
    cells.push_back({{"coords", coord}, {"value", number(cube.value(cell))}, {"facts", cell.facts}});
  json out = {{"fact_class", cube.fact_class()},
              {"measure", cube.measure()},
              {"aggregate", to_string(cube.aggregate())},
              {"axes", axes},
              {"cells", cells},
              {"spec", spec_to_json(cube.spec())}};
  if (cube.aggregate() == AggregateFunction::Sum || cube.aggregate() == AggregateFunction::Count) {
    // Totals are additive only for sum and count.
    std::optional<double> total;
    for (const auto& [coord, cell] : cube.cells())
      if (auto v = cube.value(cell)) total = total.value_or(0.0) + *v;
    out["total"] = number(total);
  }
  return out.dump();
}

CubeSpec parse_cube_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed cube spec: ") + e.what());
  }
  return spec_from_json(j);
}

std::string cube_spec_json(const CubeSpec& spec) { return spec_to_json(spec).dump(2); }

Response model(const WarehouseStore& store) {
  return Response{200, model_json(store)};
}

Response query(const WarehouseStore& store, std::string_view body) {
  return guarded([&] {
    std::string text(body);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') text = required_string(json::parse(text), "query");
    const auto q = parse_query(text);
    return Response{200, result_table_json(evaluate(store, q))};
  });
}

Response cube(const WarehouseStore& store, std::string_view body) {
  return guarded([&] {
    const auto spec = spec_from_json(json::parse(body));
    return Response{200, cube_json(build_cube(store, spec), store.model())};
  });
}

Response cube_op(const WarehouseStore& store, std::string_view body) {
  return guarded([&] {
    const json req = json::parse(body);
    if (!req.contains("spec")) throw Error(ErrorCode::ValidationError, "missing field 'spec'");
    const Cube base = build_cube(store, spec_from_json(req.at("spec")));
    const auto& op = required_string(req, "op");
    Cube result;
    if (op == "roll_up") {
      result = roll_up(base, required_string(req, "dimension"), store);
    } else if (op == "drill_down") {
      result = drill_down(base, required_string(req, "dimension"), store);
    } else if (op == "slice") {
      result = slice(base, required_string(req, "dimension"), required_string(req, "member"));
    } else if (op == "dice") {
      if (!req.contains("keep") || !req.at("keep").is_object())
        throw Error(ErrorCode::ValidationError, "dice needs an object field 'keep'");
      result = dice(base, req.at("keep").get<std::map<std::string, std::vector<std::string>>>());
    } else {
      throw Error(ErrorCode::ValidationError, "unknown cube operator '" + op + "'");
    }
    return Response{200, cube_json(result, store.model())};
  });
}

Response not_found(std::string_view path) {
  return error_response(404, "NOT_FOUND", "no resource at " + std::string(path));
}

}  // namespace xwacoda::api
