#include "xml_sax.hpp"

#include <expat.h>

#include <exception>
#include <memory>

#include "xwacoda/error.hpp"

namespace xwacoda::detail {

namespace {

struct ParserState {
  const SaxHandlers* handlers = nullptr;
  XML_Parser parser = nullptr;
  std::exception_ptr failure;
  XmlAttributes attrs;
};

void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<ParserState*>(user);
  if (st->failure) return;
  try {
    st->attrs.clear();
    for (int i = 0; atts[i] != nullptr; i += 2) st->attrs.emplace_back(atts[i], atts[i + 1]);
    if (st->handlers->start) st->handlers->start(name, st->attrs);
  } catch (...) {
    st->failure = std::current_exception();
    XML_StopParser(st->parser, XML_FALSE);
  }
}

void on_end(void* user, const XML_Char* name) {
  auto* st = static_cast<ParserState*>(user);
  if (st->failure) return;
  try {
    if (st->handlers->end) st->handlers->end(name);
  } catch (...) {
    st->failure = std::current_exception();
    XML_StopParser(st->parser, XML_FALSE);
  }
}

void on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<ParserState*>(user);
  if (st->failure) return;
  try {
    if (st->handlers->text) st->handlers->text(std::string_view(s, static_cast<std::size_t>(len)));
  } catch (...) {
    st->failure = std::current_exception();
    XML_StopParser(st->parser, XML_FALSE);
  }
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

void sax_parse(std::string_view document, const SaxHandlers& handlers) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error(ErrorCode::IoError, "cannot allocate XML parser");

  ParserState state;
  state.handlers = &handlers;
  state.parser = parser.get();
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  constexpr std::size_t kChunk = 1 << 20;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(kChunk, document.size() - offset);
    const bool last = offset + n == document.size();
    const auto status =
        XML_Parse(parser.get(), document.data() + offset, static_cast<int>(n), last ? 1 : 0);
    if (state.failure) std::rethrow_exception(state.failure);
    if (status != XML_STATUS_OK) {
      throw Error(ErrorCode::MalformedXml,
                  "malformed XML at line " +
                      std::to_string(XML_GetCurrentLineNumber(parser.get())) + ", column " +
                      std::to_string(XML_GetCurrentColumnNumber(parser.get())) + ": " +
                      XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    offset += n;
  } while (offset < document.size());
}

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace xwacoda::detail
