#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xwacoda {

using NodeId = std::uint32_t;

enum class NodeKind { Element, Attribute };

/// Labeled ordered tree view of an XML document: every node carries a label
/// (an element name or an attribute name) and optionally a value. Attribute
/// nodes always have a value; element nodes have one when they carry
/// non-whitespace character data.
class XmlGraph {
 public:
  struct Node {
    NodeKind kind = NodeKind::Element;
    std::string label;
    std::optional<std::string> value;
    std::optional<NodeId> parent;
    // Attribute children precede element children; both in document order.
    std::vector<NodeId> children;
  };

  XmlGraph() = default;

  /// Starts a new graph whose root element is `label`.
  explicit XmlGraph(std::string root_label);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  NodeKind kind(NodeId id) const { return node(id).kind; }
  const std::string& label(NodeId id) const { return node(id).label; }
  const std::optional<std::string>& value(NodeId id) const { return node(id).value; }
  std::optional<NodeId> parent(NodeId id) const { return node(id).parent; }
  std::span<const NodeId> children(NodeId id) const { return node(id).children; }

  std::optional<NodeId> attribute(NodeId element, std::string_view name) const;
  std::optional<std::string_view> attribute_value(NodeId element, std::string_view name) const;
  std::vector<NodeId> attributes(NodeId element) const;
  std::vector<NodeId> child_elements(NodeId element) const;

  NodeId add_element(NodeId parent, std::string label);
  NodeId add_attribute(NodeId element, std::string label, std::string value);
  void append_text(NodeId element, std::string_view text);
  void set_value(NodeId id, std::optional<std::string> value);

 private:
  std::vector<Node> nodes_;
};

/// Parses a well-formed XML document. Throws Error(MalformedXml) otherwise.
XmlGraph parse_xml_graph(std::string_view document);

/// True iff `a` and `a_prime` carry equal values under different labels.
/// Throws Error(NotAttributeNode) when `a` is not an attribute child of `e`
/// or `a_prime` is not an attribute child of `e_prime`.
bool is_virtual_key_reference(const XmlGraph& g, NodeId e, NodeId e_prime, NodeId a,
                              NodeId a_prime);

/// Variant for links that span two documents (fact -> dimension).
bool is_virtual_key_reference(const XmlGraph& g, NodeId e, NodeId a, const XmlGraph& g_prime,
                              NodeId e_prime, NodeId a_prime);

}  // namespace xwacoda
