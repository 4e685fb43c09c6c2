#include <algorithm>
#include <fstream>
#include <sstream>

#include "xwacoda/store.hpp"

namespace xwacoda {

DimensionTable::DimensionTable(DimensionDef def, std::vector<DimensionMember> members)
    : def_(std::move(def)), members_(std::move(members)) {
  const auto n = members_.size();
  by_id_.reserve(n);
  level_of_.resize(n);
  by_level_.resize(def_.levels.size());
  parents_.resize(n);
  children_.resize(n);
  attr_index_.resize(def_.levels.size());
  for (std::size_t l = 0; l < def_.levels.size(); ++l) attr_index_[l].resize(def_.levels[l].attributes.size());

  for (MemberIndex i = 0; i < n; ++i) {
    const auto& m = members_[i];
    by_id_.emplace(m.id, i);
    const auto level = def_.level_index(m.level).value_or(0);
    level_of_[i] = level;
    by_level_[level].push_back(i);
    for (std::size_t a = 0; a < m.attributes.size() && a < attr_index_[level].size(); ++a) {
      if (m.attributes[a]) attr_index_[level][a][format_value(*m.attributes[a])].push_back(i);
    }
  }
  for (MemberIndex i = 0; i < n; ++i) {
    for (const auto& p : members_[i].roll_up)
      if (auto it = by_id_.find(p); it != by_id_.end()) parents_[i].push_back(it->second);
    for (const auto& c : members_[i].drill_down)
      if (auto it = by_id_.find(c); it != by_id_.end()) children_[i].push_back(it->second);
  }
  for (auto& level : by_level_) {
    std::sort(level.begin(), level.end(),
              [&](MemberIndex a, MemberIndex b) { return members_[a].id < members_[b].id; });
  }
}

std::optional<MemberIndex> DimensionTable::find(std::string_view member_id) const {
  auto it = by_id_.find(std::string(member_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::span<const MemberIndex> DimensionTable::lookup(std::size_t level, std::size_t attribute,
                                                    const Value& value) const {
  if (level >= attr_index_.size() || attribute >= attr_index_[level].size()) return {};
  const auto& index = attr_index_[level][attribute];
  auto it = index.find(format_value(value));
  if (it == index.end()) return {};
  return it->second;
}

FactTable::FactTable(FactClassDef def, std::vector<FactRecord> records,
                     const std::vector<const DimensionTable*>& dimensions)
    : def_(std::move(def)), records_(std::move(records)) {
  const auto n = records_.size();
  refs_.assign(def_.dimension_refs.size(), std::vector<MemberIndex>(n));
  values_.assign(def_.measures.size(), std::vector<double>(n, 0.0));
  present_.assign(def_.measures.size(), std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = records_[i];
    for (std::size_t r = 0; r < refs_.size(); ++r) refs_[r][i] = dimensions[r]->find(rec.dim_refs[r]).value();
    for (std::size_t m = 0; m < values_.size(); ++m) {
      if (rec.measures[m]) {
        values_[m][i] = *rec.measures[m];
        present_[m][i] = 1;
      }
    }
  }
}

WarehouseStore WarehouseStore::build(WarehouseContents contents, HierarchyMode mode) {
  contents.facts.resize(contents.model.fact_classes.size());
  contents.members.resize(contents.model.dimensions.size());
  if (auto report = check_integrity(contents, mode); !report.empty()) throw IntegrityError(std::move(report));

  WarehouseStore store;
  store.model_ = contents.model;
  store.mode_ = mode;
  store.dimensions_.reserve(contents.model.dimensions.size());
  for (std::size_t d = 0; d < contents.model.dimensions.size(); ++d)
    store.dimensions_.emplace_back(contents.model.dimensions[d], std::move(contents.members[d]));

  for (std::size_t f = 0; f < contents.model.fact_classes.size(); ++f) {
    const auto& def = contents.model.fact_classes[f];
    std::vector<const DimensionTable*> dims;
    for (const auto& ref : def.dimension_refs) dims.push_back(store.find_dimension(ref));
    store.fact_tables_.emplace_back(def, std::move(contents.facts[f]), dims);
  }
  return store;
}

const DimensionTable* WarehouseStore::find_dimension(std::string_view dimension_id) const {
  for (const auto& d : dimensions_)
    if (d.id() == dimension_id) return &d;
  return nullptr;
}

const DimensionTable& WarehouseStore::dimension(std::string_view dimension_id) const {
  if (auto d = find_dimension(dimension_id)) return *d;
  throw Error(ErrorCode::UnknownDimensionId, "unknown dimension '" + std::string(dimension_id) + "'");
}

const FactTable* WarehouseStore::find_facts(std::string_view fact_class_id) const {
  for (const auto& f : fact_tables_)
    if (f.id() == fact_class_id) return &f;
  return nullptr;
}

const FactTable& WarehouseStore::facts(std::string_view fact_class_id) const {
  if (auto f = find_facts(fact_class_id)) return *f;
  throw Error(ErrorCode::ValidationError, "unknown fact class '" + std::string(fact_class_id) + "'");
}

std::size_t WarehouseStore::fact_count() const {
  std::size_t n = 0;
  for (const auto& f : fact_tables_) n += f.size();
  return n;
}

std::size_t WarehouseStore::member_count() const {
  std::size_t n = 0;
  for (const auto& d : dimensions_) n += d.members().size();
  return n;
}

WarehouseContents parse_warehouse_documents(const WarehouseModel& model,
                                            const std::map<std::string, std::string>& documents) {
  auto fetch = [&](const std::string& path) -> const std::string& {
    auto it = documents.find(path);
    if (it == documents.end()) throw Error(ErrorCode::FileNotFound, "missing warehouse document: " + path);
    return it->second;
  };
  WarehouseContents contents;
  contents.model = model;
  for (const auto& dim : model.dimensions) contents.members.push_back(parse_dimension_document(fetch(dim.document_path), dim));
  for (const auto& fc : model.fact_classes) contents.facts.push_back(parse_fact_document(fetch(fc.document_path), fc));
  return contents;
}

std::map<std::string, std::string> serialize_warehouse_documents(const WarehouseContents& contents) {
  std::map<std::string, std::string> out;
  const auto& model = contents.model;
  for (std::size_t d = 0; d < model.dimensions.size(); ++d) {
    std::span<const DimensionMember> members;
    if (d < contents.members.size()) members = contents.members[d];
    out[model.dimensions[d].document_path] = serialize_dimension_document(members, model.dimensions[d]);
  }
  for (std::size_t f = 0; f < model.fact_classes.size(); ++f) {
    std::span<const FactRecord> facts;
    if (f < contents.facts.size()) facts = contents.facts[f];
    out[model.fact_classes[f].document_path] = serialize_fact_document(facts, model.fact_classes[f]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorCode::FileNotFound, "file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return std::move(buf).str();
}

WarehouseContents read_warehouse(const std::filesystem::path& model_path) {
  std::filesystem::path model_file = model_path;
  std::error_code ec;
  if (std::filesystem::is_directory(model_file, ec)) model_file /= kModelFileName;
  const WarehouseModel model = parse_model(read_file(model_file));
  const auto base = model_file.parent_path();

  WarehouseContents contents;
  contents.model = model;
  for (const auto& dim : model.dimensions)
    contents.members.push_back(parse_dimension_document(read_file(base / dim.document_path), dim));
  for (const auto& fc : model.fact_classes)
    contents.facts.push_back(parse_fact_document(read_file(base / fc.document_path), fc));
  return contents;
}

WarehouseStore load_warehouse(const std::filesystem::path& model_path, HierarchyMode mode) {
  return WarehouseStore::build(read_warehouse(model_path), mode);
}

}  // namespace xwacoda
