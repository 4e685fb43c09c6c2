#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xwacoda/error.hpp"
#include "xwacoda/model.hpp"
#include "xwacoda/value.hpp"

namespace xwacoda {

/// Strict hierarchies require exactly one Roll-up parent for every member
/// below the coarsest level; lenient ones accept several.
enum class HierarchyMode { Strict, Lenient };

/// One fact. `measures` is aligned with FactClassDef::measures (std::nullopt
/// when the fact omits the measure); `dim_refs` is aligned with
/// FactClassDef::dimension_refs and holds base-level member ids.
struct FactRecord {
  std::string fact_class;
  std::string id;  // optional label from the `id` attribute; may be empty
  std::vector<std::optional<double>> measures;
  std::vector<std::string> dim_refs;

  friend bool operator==(const FactRecord&, const FactRecord&) = default;
};

/// One `instance` of a dimension level. `attributes` is aligned with the
/// level's AttributeDef list; absent attributes are std::nullopt.
struct DimensionMember {
  std::string dimension;
  std::string level;
  std::string id;
  std::vector<std::optional<Value>> attributes;
  std::vector<std::string> roll_up;
  std::vector<std::string> drill_down;

  friend bool operator==(const DimensionMember&, const DimensionMember&) = default;
};

std::vector<FactRecord> parse_fact_document(std::string_view document, const FactClassDef& fact_class);
std::vector<DimensionMember> parse_dimension_document(std::string_view document, const DimensionDef& dim);

std::string serialize_fact_document(std::span<const FactRecord> facts, const FactClassDef& fact_class);
std::string serialize_dimension_document(std::span<const DimensionMember> members, const DimensionDef& dim);

/// Parsed but not yet indexed warehouse. `facts` is aligned with
/// model.fact_classes and `members` with model.dimensions.
struct WarehouseContents {
  WarehouseModel model;
  std::vector<std::vector<FactRecord>> facts;
  std::vector<std::vector<DimensionMember>> members;
};

/// Referential integrity report; empty iff the warehouse is consistent.
/// Codes: DANGLING_FACT_REF, MALFORMED_FACT, DUPLICATE_MEMBER_ID,
/// UNKNOWN_LEVEL, DANGLING_ROLLUP, DANGLING_DRILLDOWN, ASYMMETRIC_HIERARCHY,
/// NONSTRICT_ROLLUP (strict mode), MISSING_ROLLUP (lenient mode).
std::vector<Diagnostic> check_integrity(const WarehouseContents& contents,
                                        HierarchyMode mode = HierarchyMode::Strict);

using MemberIndex = std::uint32_t;

class DimensionTable {
 public:
  DimensionTable(DimensionDef def, std::vector<DimensionMember> members);

  const DimensionDef& def() const { return def_; }
  const std::string& id() const { return def_.id; }
  std::size_t level_count() const { return def_.levels.size(); }

  std::span<const DimensionMember> members() const { return members_; }
  const DimensionMember& member(MemberIndex m) const { return members_[m]; }
  std::optional<MemberIndex> find(std::string_view member_id) const;

  std::size_t level_of(MemberIndex m) const { return level_of_[m]; }
  /// Members of one level, ascending by member id.
  std::span<const MemberIndex> level_members(std::size_t level) const { return by_level_[level]; }
  std::span<const MemberIndex> parents(MemberIndex m) const { return parents_[m]; }
  std::span<const MemberIndex> children(MemberIndex m) const { return children_[m]; }

  /// Members of `level` whose attribute equals `value` (hash lookup).
  std::span<const MemberIndex> lookup(std::size_t level, std::size_t attribute, const Value& value) const;

 private:
  DimensionDef def_;
  std::vector<DimensionMember> members_;
  std::unordered_map<std::string, MemberIndex> by_id_;
  std::vector<std::size_t> level_of_;
  std::vector<std::vector<MemberIndex>> by_level_;
  std::vector<std::vector<MemberIndex>> parents_;
  std::vector<std::vector<MemberIndex>> children_;
  // [level][attribute] -> canonical value text -> members
  std::vector<std::vector<std::unordered_map<std::string, std::vector<MemberIndex>>>> attr_index_;
};

/// Facts of one class with member references resolved to ordinals and
/// measures stored column-wise.
class FactTable {
 public:
  FactTable(FactClassDef def, std::vector<FactRecord> records,
            const std::vector<const DimensionTable*>& dimensions);

  const FactClassDef& def() const { return def_; }
  const std::string& id() const { return def_.id; }
  std::size_t size() const { return records_.size(); }

  std::span<const FactRecord> records() const { return records_; }
  /// Base-member ordinals for dimension slot `ref` (position in dimension_refs).
  std::span<const MemberIndex> refs(std::size_t ref) const { return refs_[ref]; }
  std::span<const double> measure_values(std::size_t measure) const { return values_[measure]; }
  std::span<const std::uint8_t> measure_present(std::size_t measure) const { return present_[measure]; }

 private:
  FactClassDef def_;
  std::vector<FactRecord> records_;
  std::vector<std::vector<MemberIndex>> refs_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::uint8_t>> present_;
};

/// Immutable, indexed, integrity-checked warehouse.
class WarehouseStore {
 public:
  /// Throws IntegrityError when check_integrity reports anything.
  static WarehouseStore build(WarehouseContents contents, HierarchyMode mode = HierarchyMode::Strict);

  const WarehouseModel& model() const { return model_; }
  HierarchyMode mode() const { return mode_; }

  const DimensionTable& dimension(std::string_view dimension_id) const;
  const DimensionTable* find_dimension(std::string_view dimension_id) const;
  std::span<const DimensionTable> dimensions() const { return dimensions_; }

  const FactTable& facts(std::string_view fact_class_id) const;
  const FactTable* find_facts(std::string_view fact_class_id) const;
  std::span<const FactTable> fact_tables() const { return fact_tables_; }

  std::size_t fact_count() const;
  std::size_t member_count() const;

 private:
  WarehouseStore() = default;

  WarehouseModel model_;
  HierarchyMode mode_ = HierarchyMode::Strict;
  std::vector<DimensionTable> dimensions_;
  std::vector<FactTable> fact_tables_;
};

/// Parses every document named by `model` from `documents` (keyed by the
/// model's document paths). Throws Error(FileNotFound) for a missing key.
WarehouseContents parse_warehouse_documents(const WarehouseModel& model,
                                            const std::map<std::string, std::string>& documents);

std::map<std::string, std::string> serialize_warehouse_documents(const WarehouseContents& contents);

/// `model_path` names the model document or a directory holding dw-model.xml.
/// Document paths resolve relative to the model document's directory.
WarehouseContents read_warehouse(const std::filesystem::path& model_path);
WarehouseStore load_warehouse(const std::filesystem::path& model_path,
                              HierarchyMode mode = HierarchyMode::Strict);

inline constexpr std::string_view kModelFileName = "dw-model.xml";

std::string read_file(const std::filesystem::path& path);

}  // namespace xwacoda
