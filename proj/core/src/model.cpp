#include "xwacoda/model.hpp"

#include <algorithm>
#include <set>

#include "xml_sax.hpp"
#include "xwacoda/xml_graph.hpp"

namespace xwacoda {

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  for (const auto& item : items)
    if (item.id == id) return &item;
  return nullptr;
}

template <typename T>
std::optional<std::size_t> index_by_id(const std::vector<T>& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return i;
  return std::nullopt;
}

}  // namespace

const AttributeDef* LevelDef::find_attribute(std::string_view attribute_id) const {
  return find_by_id(attributes, attribute_id);
}
std::optional<std::size_t> LevelDef::attribute_index(std::string_view attribute_id) const {
  return index_by_id(attributes, attribute_id);
}
const LevelDef* DimensionDef::find_level(std::string_view level_id) const {
  return find_by_id(levels, level_id);
}
std::optional<std::size_t> DimensionDef::level_index(std::string_view level_id) const {
  return index_by_id(levels, level_id);
}
const AttributeDef* FactClassDef::find_measure(std::string_view measure_id) const {
  return find_by_id(measures, measure_id);
}
std::optional<std::size_t> FactClassDef::measure_index(std::string_view measure_id) const {
  return index_by_id(measures, measure_id);
}
std::optional<std::size_t> FactClassDef::dimension_ref_index(std::string_view dimension_id) const {
  for (std::size_t i = 0; i < dimension_refs.size(); ++i)
    if (dimension_refs[i] == dimension_id) return i;
  return std::nullopt;
}
const DimensionDef* WarehouseModel::find_dimension(std::string_view dimension_id) const {
  return find_by_id(dimensions, dimension_id);
}
const FactClassDef* WarehouseModel::find_fact_class(std::string_view fact_class_id) const {
  return find_by_id(fact_classes, fact_class_id);
}

bool operator==(const WarehouseModel& a, const WarehouseModel& b) {
  auto by_id = [](const auto& x, const auto& y) { return x.id < y.id; };
  auto da = a.dimensions, db = b.dimensions;
  auto fa = a.fact_classes, fb = b.fact_classes;
  std::sort(da.begin(), da.end(), by_id);
  std::sort(db.begin(), db.end(), by_id);
  std::sort(fa.begin(), fa.end(), by_id);
  std::sort(fb.begin(), fb.end(), by_id);
  return da == db && fa == fb;
}

// ---------------------------------------------------------------------------
// validation

namespace {

class Validator {
 public:
  std::vector<Diagnostic> out;

  void id(const std::string& value, const std::string& path) {
    if (value.empty()) {
      add("EMPTY_ID", path, "id must be non-empty");
    } else if (value.find_first_of(" \t\r\n") != std::string::npos) {
      add("INVALID_ID", path, "id '" + value + "' contains whitespace");
    }
  }

  template <typename T>
  void unique(const std::vector<T>& items, const char* code, const std::string& path) {
    std::set<std::string> seen;
    for (const auto& item : items)
      if (!seen.insert(item.id).second) add(code, path + "/" + item.id, "duplicate id '" + item.id + "'");
  }

  void add(std::string code, std::string path, std::string message) {
    out.push_back(Diagnostic{std::move(code), std::move(path), std::move(message)});
  }
};

}  // namespace

std::vector<Diagnostic> validate_model(const WarehouseModel& model) {
  Validator v;
  if (model.dimensions.empty()) v.add("NO_DIMENSIONS", "", "model declares no dimension");
  if (model.fact_classes.empty()) v.add("NO_FACT_CLASSES", "", "model declares no fact class");
  v.unique(model.dimensions, "DUPLICATE_DIMENSION_ID", "");
  v.unique(model.fact_classes, "DUPLICATE_FACT_CLASS_ID", "");

  for (const auto& dim : model.dimensions) {
    const std::string path = dim.id;
    v.id(dim.id, path);
    if (dim.document_path.empty()) v.add("MISSING_PATH", path, "dimension has no document path");
    if (dim.levels.empty()) v.add("NO_LEVELS", path, "dimension declares no level");
    v.unique(dim.levels, "DUPLICATE_LEVEL_ID", path);
    for (const auto& level : dim.levels) {
      const std::string lpath = path + "/" + level.id;
      v.id(level.id, lpath);
      if (level.attributes.empty()) v.add("NO_ATTRIBUTES", lpath, "level declares no attribute");
      v.unique(level.attributes, "DUPLICATE_ATTRIBUTE_ID", lpath);
      for (const auto& attr : level.attributes) v.id(attr.id, lpath + "/" + attr.id);
    }
  }

  for (const auto& fc : model.fact_classes) {
    const std::string path = fc.id;
    v.id(fc.id, path);
    if (fc.document_path.empty()) v.add("MISSING_PATH", path, "fact class has no document path");
    if (fc.measures.empty()) v.add("NO_MEASURES", path, "fact class declares no measure");
    if (fc.dimension_refs.empty()) v.add("NO_DIMENSION_REFS", path, "fact class references no dimension");
    v.unique(fc.measures, "DUPLICATE_MEASURE_ID", path);
    for (const auto& m : fc.measures) {
      v.id(m.id, path + "/" + m.id);
      if (!is_numeric(m.value_type)) {
        v.add("NON_NUMERIC_MEASURE", path + "/" + m.id,
              "measure type must be integer or decimal, got " + std::string(to_string(m.value_type)));
      }
    }
    std::set<std::string> seen;
    for (const auto& ref : fc.dimension_refs) {
      if (!seen.insert(ref).second) {
        v.add("DUPLICATE_DIMENSION_REF", path + "/" + ref, "dimension referenced twice");
      } else if (!model.find_dimension(ref)) {
        v.add("DANGLING_DIMENSION_REF", path + "/" + ref, "undeclared dimension '" + ref + "'");
      }
    }
  }
  return v.out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

[[noreturn]] void violation(const std::string& message) {
  throw Error(ErrorCode::SchemaViolation, message);
}

class ModelReader {
 public:
  explicit ModelReader(const XmlGraph& g) : g_(g) {}

  WarehouseModel read() {
    const NodeId root = g_.root();
    if (g_.label(root) != "DW-model") violation("root element must be DW-model, got " + g_.label(root));
    expect_attributes(root, {});
    WarehouseModel model;
    for (NodeId child : g_.child_elements(root)) {
      const auto& name = g_.label(child);
      if (name == "dimension") {
        model.dimensions.push_back(read_dimension(child));
      } else if (name == "FactDoc") {
        model.fact_classes.push_back(read_fact_class(child));
      } else {
        violation("unexpected element '" + name + "' under DW-model");
      }
    }
    return model;
  }

 private:
  const XmlGraph& g_;

  void expect_attributes(NodeId e, std::initializer_list<std::string_view> allowed) {
    for (NodeId a : g_.attributes(e)) {
      if (std::find(allowed.begin(), allowed.end(), g_.label(a)) == allowed.end())
        violation("unexpected attribute '" + g_.label(a) + "' on " + g_.label(e));
    }
    if (g_.value(e)) violation("unexpected character data in " + g_.label(e));
  }

  std::string required(NodeId e, std::string_view name) {
    auto v = g_.attribute_value(e, name);
    if (!v) violation("element " + g_.label(e) + " lacks required attribute '" + std::string(name) + "'");
    return std::string(*v);
  }

  AttributeDef read_typed(NodeId e) {
    expect_attributes(e, {"id", "type"});
    if (!g_.child_elements(e).empty()) violation(g_.label(e) + " must be empty");
    AttributeDef def;
    def.id = required(e, "id");
    const auto type_text = required(e, "type");
    auto type = parse_value_type(type_text);
    if (!type) violation("unknown type '" + type_text + "' on " + g_.label(e) + " " + def.id);
    def.value_type = *type;
    return def;
  }

  DimensionDef read_dimension(NodeId e) {
    expect_attributes(e, {"id", "path"});
    DimensionDef dim;
    dim.id = required(e, "id");
    dim.document_path = required(e, "path");
    for (NodeId child : g_.child_elements(e)) {
      if (g_.label(child) != "Level") violation("unexpected element '" + g_.label(child) + "' in dimension " + dim.id);
      expect_attributes(child, {"id"});
      LevelDef level;
      level.id = required(child, "id");
      for (NodeId attr : g_.child_elements(child)) {
        if (g_.label(attr) != "attribute") violation("unexpected element '" + g_.label(attr) + "' in Level " + level.id);
        level.attributes.push_back(read_typed(attr));
      }
      dim.levels.push_back(std::move(level));
    }
    return dim;
  }

  FactClassDef read_fact_class(NodeId e) {
    expect_attributes(e, {"id", "path"});
    FactClassDef fc;
    fc.id = required(e, "id");
    fc.document_path = required(e, "path");
    for (NodeId child : g_.child_elements(e)) {
      const auto& name = g_.label(child);
      if (name == "measure") {
        fc.measures.push_back(read_typed(child));
      } else if (name == "dimension-ref") {
        expect_attributes(child, {"dim-id"});
        if (!g_.child_elements(child).empty()) violation("dimension-ref must be empty");
        fc.dimension_refs.push_back(required(child, "dim-id"));
      } else {
        violation("unexpected element '" + name + "' in FactDoc " + fc.id);
      }
    }
    return fc;
  }
};

}  // namespace

WarehouseModel parse_model(std::string_view document) {
  const XmlGraph graph = parse_xml_graph(document);
  WarehouseModel model = ModelReader(graph).read();
  if (auto diags = validate_model(model); !diags.empty()) {
    std::string message = "invalid warehouse model:";
    for (const auto& d : diags) message += "\n  " + to_string(d);
    violation(message);
  }
  return model;
}

std::string serialize_model(const WarehouseModel& model) {
  using detail::escape_xml;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<DW-model>\n";
  auto typed = [&](const char* tag, const AttributeDef& a, const char* indent) {
    out += indent;
    out += "<";
    out += tag;
    out += " id=\"" + escape_xml(a.id) + "\" type=\"" + std::string(to_string(a.value_type)) + "\"/>\n";
  };
  for (const auto& dim : model.dimensions) {
    out += "  <dimension id=\"" + escape_xml(dim.id) + "\" path=\"" + escape_xml(dim.document_path) + "\">\n";
    for (const auto& level : dim.levels) {
      out += "    <Level id=\"" + escape_xml(level.id) + "\">\n";
      for (const auto& attr : level.attributes) typed("attribute", attr, "      ");
      out += "    </Level>\n";
    }
    out += "  </dimension>\n";
  }
  for (const auto& fc : model.fact_classes) {
    out += "  <FactDoc id=\"" + escape_xml(fc.id) + "\" path=\"" + escape_xml(fc.document_path) + "\">\n";
    for (const auto& m : fc.measures) typed("measure", m, "    ");
    for (const auto& ref : fc.dimension_refs) out += "    <dimension-ref dim-id=\"" + escape_xml(ref) + "\"/>\n";
    out += "  </FactDoc>\n";
  }
  out += "</DW-model>\n";
  return out;
}

}  // namespace xwacoda
