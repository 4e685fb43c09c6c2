#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xwacoda/model.hpp"
#include "xwacoda/store.hpp"
#include "xwacoda/xml_graph.hpp"

namespace xwacoda::etl {

// ---------------------------------------------------------------------------
// Attribute trees

enum class NodeKind { Root, Entity, Attribute };

struct AttributeNode {
  std::string name;
  NodeKind kind = NodeKind::Entity;
  std::optional<ValueType> value_type;
  std::vector<AttributeNode> children;

  friend bool operator==(const AttributeNode&, const AttributeNode&) = default;
};

struct AttributeTree {
  AttributeNode root{"", NodeKind::Root, std::nullopt, {}};

  friend bool operator==(const AttributeTree&, const AttributeTree&) = default;
};

/// Elements become entity nodes; XML attributes and text-only (or empty)
/// leaf elements become attribute nodes. Repeated sibling elements of the
/// same name are folded into one node.
AttributeTree build_attribute_tree(const XmlGraph& source_schema);
AttributeTree build_attribute_tree(std::string_view document);

/// Lower-case with '-' and ' ' mapped to '_'.
std::string normalize_name(std::string_view name);

struct MergeResult {
  AttributeTree tree;
  /// Goal leaves no source node matched, as slash-separated paths.
  std::vector<std::string> uncovered;
};

/// Keeps exactly the goal's nodes (pruning) and expands every goal leaf that
/// names a source entity with that entity's subtree (grafting). Sources are
/// searched in order, pre-order within each; the first match wins.
MergeResult merge_attribute_trees(const AttributeTree& goal, std::span<const AttributeTree> sources);

// ---------------------------------------------------------------------------
// Source records

struct SourceRecordSet {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> field_index(std::string_view field) const;
};

/// Delimited text with a header line; double-quoted fields may contain the
/// delimiter, newlines and "" escapes. Throws Error(MappingError) on ragged rows.
SourceRecordSet read_delimited(std::string_view text, char delimiter = ',');

/// Flat XML records: every child of the root is one record; its attributes
/// and the leaf elements below it (attributes of nested elements included)
/// become fields named after the leaf. Missing fields read as "".
SourceRecordSet read_xml_records(std::string_view document);

/// Concatenates record sets, unioning headers in first-appearance order.
SourceRecordSet concat(std::span<const SourceRecordSet> sets);

// ---------------------------------------------------------------------------
// Mapping

/// Closed numeric interval mapped to a level attribute value.
struct Bucket {
  double min = 0;
  double max = 0;
  std::string value;

  friend bool operator==(const Bucket&, const Bucket&) = default;
};

struct AttributeSource {
  std::string attribute;
  std::string field;
  std::vector<Bucket> buckets;  // empty: copy the field verbatim

  friend bool operator==(const AttributeSource&, const AttributeSource&) = default;
};

struct LevelMapping {
  std::string level;
  std::vector<AttributeSource> attributes;

  friend bool operator==(const LevelMapping&, const LevelMapping&) = default;
};

struct DimensionMapping {
  std::string dimension;
  /// Source fields whose value tuple identifies a base-level member.
  std::vector<std::string> identity;
  std::vector<LevelMapping> levels;

  friend bool operator==(const DimensionMapping&, const DimensionMapping&) = default;
};

struct MeasureSource {
  std::string measure;
  std::string field;

  friend bool operator==(const MeasureSource&, const MeasureSource&) = default;
};

struct MappingConfig {
  std::string fact_class;
  std::vector<MeasureSource> measures;
  std::vector<DimensionMapping> dimensions;

  friend bool operator==(const MappingConfig&, const MappingConfig&) = default;
};

/// JSON mapping file; see README for the format. Throws Error(MappingError).
MappingConfig parse_mapping(std::string_view json_text);
std::string serialize_mapping(const MappingConfig& mapping);

/// Throws Error(MappingError) naming the first unknown field or target.
/// `header` may be empty for an empty source, in which case field names are
/// not checked.
void validate_mapping(const MappingConfig& mapping, std::span<const std::string> header, const WarehouseModel& model);

/// Goal attribute tree implied by a mapping: the fact class as root, one
/// entity per mapped dimension holding its source fields, measure fields as
/// leaves of the root.
AttributeTree goal_tree(const MappingConfig& mapping);

/// Builds warehouse contents from records. Members are identified by their
/// identity field tuple (base level) or attribute tuple (coarser levels); ids are
/// "m" + six-digit ordinal of first appearance, per dimension. A member's
/// attributes and Roll-up parent come from its first appearance. Throws
/// Error(MappingError) or Error(TypeError).
WarehouseContents build_warehouse(const SourceRecordSet& records, const MappingConfig& mapping,
                                  const WarehouseModel& model);

/// Serialized fact and dimension documents, keyed by the model's paths.
std::map<std::string, std::string> generate_warehouse(const SourceRecordSet& records, const MappingConfig& mapping,
                                                      const WarehouseModel& model);

std::string member_id(std::size_t ordinal);

}  // namespace xwacoda::etl
