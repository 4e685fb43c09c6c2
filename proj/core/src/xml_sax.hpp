#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xwacoda::detail {

using XmlAttributes = std::vector<std::pair<std::string_view, std::string_view>>;

/// Thin streaming wrapper over expat. Callbacks see element names and
/// attributes in document order; character data may arrive in pieces.
struct SaxHandlers {
  std::function<void(std::string_view name, const XmlAttributes& attrs)> start;
  std::function<void(std::string_view name)> end;
  std::function<void(std::string_view text)> text;
};

/// Throws Error(MalformedXml) with line/column on a well-formedness error.
/// Exceptions thrown from handlers stop the parse and propagate unchanged.
void sax_parse(std::string_view document, const SaxHandlers& handlers);

std::string escape_xml(std::string_view text);

}  // namespace xwacoda::detail
