#include <unordered_map>

#include "xml_sax.hpp"
#include "xwacoda/etl.hpp"

namespace xwacoda::etl {

std::optional<std::size_t> SourceRecordSet::field_index(std::string_view field) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == field) return i;
  return std::nullopt;
}

namespace {

std::vector<std::vector<std::string>> split_delimited(std::string_view text, char delim) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;  // current row has content
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == delim) {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        lines.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::MappingError, "unterminated quoted field in delimited source");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    lines.push_back(std::move(row));
  }
  return lines;
}

}  // namespace

SourceRecordSet read_delimited(std::string_view text, char delimiter) {
  auto lines = split_delimited(text, delimiter);
  SourceRecordSet out;
  if (lines.empty()) return out;
  out.header = std::move(lines.front());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != out.header.size()) {
      throw Error(ErrorCode::MappingError, "row " + std::to_string(r + 1) + " has " + std::to_string(lines[r].size()) +
                                               " fields, header has " + std::to_string(out.header.size()));
    }
    out.rows.push_back(std::move(lines[r]));
  }
  return out;
}

SourceRecordSet read_xml_records(std::string_view document) {
  const XmlGraph g = parse_xml_graph(document);
  SourceRecordSet out;
  std::unordered_map<std::string, std::size_t> column;
  auto col = [&](const std::string& name) {
    auto [it, inserted] = column.try_emplace(name, out.header.size());
    if (inserted) {
      out.header.push_back(name);
      for (auto& r : out.rows) r.emplace_back();
    }
    return it->second;
  };
  for (NodeId rec : g.child_elements(g.root())) {
    out.rows.emplace_back(out.header.size());
    auto visit = [&](auto&& self, NodeId e) -> void {
      for (NodeId a : g.attributes(e)) {
        const auto c = col(g.label(a));
        out.rows.back()[c] = *g.value(a);
      }
      const auto kids = g.child_elements(e);
      if (e != rec && kids.empty() && g.attributes(e).empty()) {
        const auto c = col(g.label(e));
        out.rows.back()[c] = g.value(e).value_or("");
      }
      for (NodeId k : kids) self(self, k);
    };
    visit(visit, rec);
  }
  return out;
}

SourceRecordSet concat(std::span<const SourceRecordSet> sets) {
  SourceRecordSet out;
  for (const auto& s : sets) {
    std::vector<std::size_t> target;
    for (const auto& h : s.header) {
      auto idx = out.field_index(h);
      if (!idx) {
        out.header.push_back(h);
        for (auto& r : out.rows) r.emplace_back();
        idx = out.header.size() - 1;
      }
      target.push_back(*idx);
    }
    for (const auto& row : s.rows) {
      std::vector<std::string> merged(out.header.size());
      for (std::size_t i = 0; i < row.size(); ++i) merged[target[i]] = row[i];
      out.rows.push_back(std::move(merged));
    }
  }
  return out;
}

}  // namespace xwacoda::etl
