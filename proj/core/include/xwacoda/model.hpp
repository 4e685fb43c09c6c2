#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xwacoda/error.hpp"
#include "xwacoda/value.hpp"

namespace xwacoda {

struct AttributeDef {
  std::string id;
  ValueType value_type = ValueType::String;

  friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

struct LevelDef {
  std::string id;
  std::vector<AttributeDef> attributes;

  const AttributeDef* find_attribute(std::string_view attribute_id) const;
  std::optional<std::size_t> attribute_index(std::string_view attribute_id) const;

  friend bool operator==(const LevelDef&, const LevelDef&) = default;
};

/// A dimension with a linear hierarchy: levels[0] is the base (finest) level,
/// levels.back() the coarsest.
struct DimensionDef {
  std::string id;
  std::vector<LevelDef> levels;
  std::string document_path;

  const LevelDef* find_level(std::string_view level_id) const;
  std::optional<std::size_t> level_index(std::string_view level_id) const;

  friend bool operator==(const DimensionDef&, const DimensionDef&) = default;
};

struct FactClassDef {
  std::string id;
  std::vector<AttributeDef> measures;
  std::vector<std::string> dimension_refs;
  std::string document_path;

  const AttributeDef* find_measure(std::string_view measure_id) const;
  std::optional<std::size_t> measure_index(std::string_view measure_id) const;
  std::optional<std::size_t> dimension_ref_index(std::string_view dimension_id) const;

  friend bool operator==(const FactClassDef&, const FactClassDef&) = default;
};

/// Warehouse metadata. Several fact classes may share dimensions.
struct WarehouseModel {
  std::vector<DimensionDef> dimensions;
  std::vector<FactClassDef> fact_classes;

  const DimensionDef* find_dimension(std::string_view dimension_id) const;
  const FactClassDef* find_fact_class(std::string_view fact_class_id) const;

  /// Level order and per-level attribute order matter; the order of the
  /// dimension and fact-class lists does not.
  friend bool operator==(const WarehouseModel& a, const WarehouseModel& b);
};

/// Reads a dw-model document. Throws Error(MalformedXml) or
/// Error(SchemaViolation); never returns a model with validation findings.
WarehouseModel parse_model(std::string_view document);

std::string serialize_model(const WarehouseModel& model);
/// Codes: NO_DIMENSIONS, NO_FACT_CLASSES, EMPTY_ID, INVALID_ID, DUPLICATE_DIMENSION_ID,
/// DUPLICATE_FACT_CLASS_ID, DUPLICATE_LEVEL_ID, DUPLICATE_ATTRIBUTE_ID, DUPLICATE_MEASURE_ID,
/// DUPLICATE_LEVEL_ID, DUPLICATE_ATTRIBUTE_ID, DUPLICATE_MEASURE_ID,
/// DUPLICATE_DIMENSION_REF, NO_LEVELS, NO_ATTRIBUTES, NO_MEASURES,
/// NO_DIMENSION_REFS, MISSING_PATH, NON_NUMERIC_MEASURE, DANGLING_DIMENSION_REF.
std::vector<Diagnostic> validate_model(const WarehouseModel& model);

}  // namespace xwacoda
