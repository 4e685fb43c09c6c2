#include <algorithm>
#include <cctype>

#include "xwacoda/etl.hpp"

namespace xwacoda::etl {

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '-' || c == ' ') out += '_';
    else out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

AttributeNode* find_child(AttributeNode& parent, std::string_view name) {
  for (auto& c : parent.children)
    if (c.name == name) return &c;
  return nullptr;
}

void fold(AttributeNode& into, AttributeNode node) {
  if (AttributeNode* existing = find_child(into, node.name)) {
    if (node.kind == NodeKind::Entity) existing->kind = NodeKind::Entity;
    for (auto& c : node.children) fold(*existing, std::move(c));
  } else {
    into.children.push_back(std::move(node));
  }
}

AttributeNode convert(const XmlGraph& g, NodeId e) {
  AttributeNode node;
  node.name = g.label(e);
  const auto attrs = g.attributes(e);
  const auto elems = g.child_elements(e);
  node.kind = attrs.empty() && elems.empty() ? NodeKind::Attribute : NodeKind::Entity;
  for (NodeId a : attrs) fold(node, AttributeNode{g.label(a), NodeKind::Attribute, std::nullopt, {}});
  for (NodeId c : elems) fold(node, convert(g, c));
  return node;
}

}  // namespace

AttributeTree build_attribute_tree(const XmlGraph& g) {
  AttributeTree tree;
  if (g.empty()) return tree;
  tree.root = convert(g, g.root());
  tree.root.kind = NodeKind::Root;
  return tree;
}

AttributeTree build_attribute_tree(std::string_view document) {
  return build_attribute_tree(parse_xml_graph(document));
}

namespace {

const AttributeNode* find_in(const AttributeNode& node, const std::string& normalized) {
  if (normalize_name(node.name) == normalized) return &node;
  for (const auto& c : node.children)
    if (auto hit = find_in(c, normalized)) return hit;
  return nullptr;
}

AttributeNode merge_node(const AttributeNode& goal, std::span<const AttributeTree> sources, const std::string& path,
                         std::vector<std::string>& uncovered) {
  AttributeNode out{goal.name, goal.kind, goal.value_type, {}};
  const std::string here = path.empty() ? goal.name : path + "/" + goal.name;
  if (!goal.children.empty() || goal.kind == NodeKind::Root) {
    for (const auto& c : goal.children) out.children.push_back(merge_node(c, sources, here, uncovered));
    return out;
  }
  const std::string wanted = normalize_name(goal.name);
  for (const auto& src : sources) {
    const AttributeNode* hit = find_in(src.root, wanted);
    if (!hit) continue;
    if (hit->kind == NodeKind::Attribute) {
      if (!out.value_type) out.value_type = hit->value_type;
    } else {
      out.kind = NodeKind::Entity;
      out.children = hit->children;
    }
    return out;
  }
  uncovered.push_back(here);
  return out;
}

}  // namespace

MergeResult merge_attribute_trees(const AttributeTree& goal, std::span<const AttributeTree> sources) {
  MergeResult result;
  result.tree.root = merge_node(goal.root, sources, "", result.uncovered);
  return result;
}

}  // namespace xwacoda::etl
