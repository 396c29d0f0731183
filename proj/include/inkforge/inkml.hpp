#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inkforge/ink.hpp"

namespace inkforge {

/// A parsed `.inkml` file. Each `<traceGroup>` is one ink; `<annotation
/// type="key">value</annotation>` children of a group become entries of that
/// ink's metadata. Traces outside any group form a single implicit ink.
struct InkmlDocument {
  std::vector<DigitalInk> inks;

  friend bool operator==(const InkmlDocument&, const InkmlDocument&) = default;
};

/// Parses the supported InkML subset (see docs/formats/inkml-subset.md).
///
/// Traces without a T channel get synthetic 20 ms timestamps. Throws
/// ParseError for malformed XML, SchemaError for unsupported or missing
/// structure, ValueError for non-numeric samples.
InkmlDocument parse_inkml(std::string_view text);

/// Deterministic serialization. Throws DataError on non-finite coordinates.
std::string serialize_inkml(const InkmlDocument& doc);

InkmlDocument read_inkml_file(const std::filesystem::path& path);
void write_inkml_file(const std::filesystem::path& path, const InkmlDocument& doc);

/// Convenience for single-ink files: the first ink of the document.
DigitalInk read_ink_file(const std::filesystem::path& path);
void write_ink_file(const std::filesystem::path& path, const DigitalInk& ink);

}  // namespace inkforge
