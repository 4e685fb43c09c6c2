#include "xwacoda/xml_graph.hpp"

#include <algorithm>

#include "xml_sax.hpp"
#include "xwacoda/error.hpp"

namespace xwacoda {

XmlGraph::XmlGraph(std::string root_label) {
  nodes_.push_back(Node{NodeKind::Element, std::move(root_label), std::nullopt, std::nullopt, {}});
}

std::optional<NodeId> XmlGraph::attribute(NodeId element, std::string_view name) const {
  for (NodeId c : children(element)) {
    const auto& n = nodes_[c];
    if (n.kind != NodeKind::Attribute) break;
    if (n.label == name) return c;
  }
  return std::nullopt;
}

std::optional<std::string_view> XmlGraph::attribute_value(NodeId element,
                                                          std::string_view name) const {
  if (auto a = attribute(element, name)) return std::string_view(*nodes_[*a].value);
  return std::nullopt;
}

std::vector<NodeId> XmlGraph::attributes(NodeId element) const {
  std::vector<NodeId> out;
  for (NodeId c : children(element))
    if (nodes_[c].kind == NodeKind::Attribute) out.push_back(c);
  return out;
}

std::vector<NodeId> XmlGraph::child_elements(NodeId element) const {
  std::vector<NodeId> out;
  for (NodeId c : children(element))
    if (nodes_[c].kind == NodeKind::Element) out.push_back(c);
  return out;
}

NodeId XmlGraph::add_element(NodeId parent, std::string label) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{NodeKind::Element, std::move(label), std::nullopt, parent, {}});
  nodes_.at(parent).children.push_back(id);
  return id;
}

NodeId XmlGraph::add_attribute(NodeId element, std::string label, std::string value) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{NodeKind::Attribute, std::move(label), std::move(value), element, {}});
  auto& siblings = nodes_.at(element).children;
  auto pos = std::find_if(siblings.begin(), siblings.end(),
                          [&](NodeId c) { return nodes_[c].kind == NodeKind::Element; });
  siblings.insert(pos, id);
  return id;
}

void XmlGraph::append_text(NodeId element, std::string_view text) {
  auto& n = nodes_.at(element);
  if (!n.value) n.value.emplace();
  n.value->append(text);
}

void XmlGraph::set_value(NodeId id, std::optional<std::string> value) {
  nodes_.at(id).value = std::move(value);
}

XmlGraph parse_xml_graph(std::string_view document) {
  XmlGraph graph;
  std::vector<NodeId> open;
  detail::SaxHandlers h;
  h.start = [&](std::string_view name, const detail::XmlAttributes& attrs) {
    NodeId id;
    if (open.empty()) {
      graph = XmlGraph(std::string(name));
      id = graph.root();
    } else {
      id = graph.add_element(open.back(), std::string(name));
    }
    for (const auto& [k, v] : attrs) graph.add_attribute(id, std::string(k), std::string(v));
    open.push_back(id);
  };
  h.end = [&](std::string_view) {
    const NodeId id = open.back();
    open.pop_back();
    // Whitespace-only character data is formatting, not a value.
    const auto& v = graph.value(id);
    if (v && v->find_first_not_of(" \t\r\n") == std::string::npos) graph.set_value(id, std::nullopt);
  };
  h.text = [&](std::string_view text) {
    if (!open.empty()) graph.append_text(open.back(), text);
  };
  detail::sax_parse(document, h);
  return graph;
}

namespace {

void require_attribute_child(const XmlGraph& g, NodeId e, NodeId a, const char* which) {
  if (a >= g.size() || e >= g.size() || g.kind(a) != NodeKind::Attribute || g.parent(a) != e) {
    throw Error(ErrorCode::NotAttributeNode,
                std::string(which) + " is not an attribute child of its stated parent element");
  }
}

}  // namespace

bool is_virtual_key_reference(const XmlGraph& g, NodeId e, NodeId a, const XmlGraph& g_prime,
                              NodeId e_prime, NodeId a_prime) {
  require_attribute_child(g, e, a, "a");
  require_attribute_child(g_prime, e_prime, a_prime, "a'");
  return *g.value(a) == *g_prime.value(a_prime) && g.label(a) != g_prime.label(a_prime);
}

bool is_virtual_key_reference(const XmlGraph& g, NodeId e, NodeId e_prime, NodeId a,
                              NodeId a_prime) {
  return is_virtual_key_reference(g, e, a, g, e_prime, a_prime);
}

}  // namespace xwacoda
