#pragma once

// Minimal non-validating XML reader used by the InkML parser. Supports
// elements, attributes, character data, CDATA, comments, processing
// instructions and the predefined/numeric entities. DTDs are skipped.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inkforge::xml {

struct Element {
  std::string name;  // local name, namespace prefix stripped
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;  // concatenated character data of this element only
  std::size_t line = 0;
  std::size_t column = 0;

  std::optional<std::string> attribute(std::string_view key) const;
};

/// Throws ParseError with the position of the first syntax error.
std::unique_ptr<Element> parse(std::string_view text);

std::string escape(std::string_view raw);

}  // namespace inkforge::xml
