#include "inkforge/inkml.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/normalize.hpp"
#include "xml.hpp"

namespace inkforge {
namespace {

struct ChannelLayout {
  int x = -1;
  int y = -1;
  int t = -1;
  int count = 0;  // 0: undeclared, accept "X Y" or "X Y T"
};

ChannelLayout read_trace_format(const xml::Element& el) {
  ChannelLayout layout;
  for (const auto& child : el.children) {
    if (child->name != "channel")
      throw SchemaError("unsupported element <" + child->name + "> in <traceFormat>");
    auto name = child->attribute("name");
    if (!name) throw SchemaError("<channel> without a name attribute");
    if (*name == "X") layout.x = layout.count;
    else if (*name == "Y") layout.y = layout.count;
    else if (*name == "T") layout.t = layout.count;
    ++layout.count;
  }
  if (layout.x < 0 || layout.y < 0) throw SchemaError("traceFormat lacks an X or Y channel");
  return layout;
}

struct PendingInk {
  DigitalInk ink;
  bool missing_time = false;
};

class DocumentBuilder {
 public:
  InkmlDocument build(const xml::Element& root) {
    if (root.name != "ink") throw SchemaError("root element must be <ink>, got <" + root.name + ">");
    for (const auto& child : root.children) {
      const std::string& n = child->name;
      if (n == "traceFormat") {
        layout_ = read_trace_format(*child);
      } else if (n == "definitions") {
        for (const auto& def : child->children) {
          if (def->name != "traceFormat")
            throw SchemaError("unsupported InkML element <" + def->name + "> in <definitions>");
          layout_ = read_trace_format(*def);
        }
      } else if (n == "annotation") {
        add_annotation(*child, doc_annotations_);
      } else if (n == "trace") {
        add_trace(*child, implicit_);
        has_implicit_ = true;
      } else if (n == "traceGroup") {
        groups_.emplace_back();
        for (const auto& g : child->children) {
          if (g->name == "trace") add_trace(*g, groups_.back());
          else if (g->name == "annotation") add_annotation(*g, groups_.back().ink.metadata);
          else throw SchemaError("unsupported InkML element <" + g->name + "> in <traceGroup>");
        }
      } else {
        throw SchemaError("unsupported InkML element <" + n + ">");
      }
    }

    std::vector<PendingInk> pending;
    if (has_implicit_ || groups_.empty()) pending.push_back(std::move(implicit_));
    for (auto& g : groups_) pending.push_back(std::move(g));

    InkmlDocument doc;
    for (auto& p : pending) {
      for (const auto& [k, v] : doc_annotations_) p.ink.metadata.emplace(k, v);
      if (p.missing_time) {
        p.ink = hallucinate_time(p.ink);
      } else if (auto problem = check_invariants(p.ink); !problem.empty()) {
        throw ValueError(problem);
      }
      doc.inks.push_back(std::move(p.ink));
    }
    return doc;
  }

 private:
  ChannelLayout layout_;
  Metadata doc_annotations_;
  PendingInk implicit_;
  bool has_implicit_ = false;
  std::vector<PendingInk> groups_;
  std::size_t trace_index_ = 0;

  static void add_annotation(const xml::Element& el, Metadata& into) {
    auto type = el.attribute("type");
    if (!type) throw SchemaError("<annotation> without a type attribute");
    into[*type] = el.text;
  }

  void add_trace(const xml::Element& el, PendingInk& into) {
    const std::size_t index = trace_index_++;
    const std::string where = "trace " + std::to_string(index);
    if (!el.children.empty()) throw SchemaError(where + " contains child elements");

    Stroke stroke;
    int width = -1;  // values per point when the layout is undeclared
    const std::string_view text = detail::trim(el.text);
    if (text.empty()) throw ValueError(where + " has no samples");
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = text.find(',', start);
      const bool last = comma == std::string_view::npos;
      if (last) comma = text.size();
      const std::string_view sample = detail::trim(text.substr(start, comma - start));
      if (sample.empty()) throw ValueError(where + ": empty sample");

      std::vector<double> values;
      std::size_t p = 0;
      while (p < sample.size()) {
        std::size_t q = sample.find_first_of(" \t\r\n", p);
        if (q == std::string_view::npos) q = sample.size();
        if (q > p) {
          const std::string_view field = sample.substr(p, q - p);
          auto v = detail::parse_double(field);
          if (!v || !std::isfinite(*v))
            throw ValueError(where + ": non-numeric sample '" + std::string(field) + "'");
          values.push_back(*v);
        }
        p = q + 1;
      }

      Point pt;
      if (layout_.count > 0) {
        if (static_cast<int>(values.size()) != layout_.count)
          throw ValueError(where + ": expected " + std::to_string(layout_.count) +
                           " channel values per sample, got " + std::to_string(values.size()));
        pt.x = values[layout_.x];
        pt.y = values[layout_.y];
        if (layout_.t >= 0) pt.t = values[layout_.t];
      } else {
        if (values.size() != 2 && values.size() != 3)
          throw ValueError(where + ": expected 2 or 3 values per sample, got " +
                           std::to_string(values.size()));
        if (width < 0) width = static_cast<int>(values.size());
        if (static_cast<int>(values.size()) != width)
          throw ValueError(where + ": inconsistent number of values per sample");
        pt.x = values[0];
        pt.y = values[1];
        if (width == 3) pt.t = values[2];
      }
      stroke.points.push_back(pt);
      if (last) break;
      start = comma + 1;
    }
    const bool has_time = layout_.count > 0 ? layout_.t >= 0 : width == 3;
    if (!has_time) into.missing_time = true;
    into.ink.strokes.push_back(std::move(stroke));
  }
};

}  // namespace

InkmlDocument parse_inkml(std::string_view text) {
  auto root = xml::parse(text);
  return DocumentBuilder().build(*root);
}

std::string serialize_inkml(const InkmlDocument& doc) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<ink xmlns=\"http://www.w3.org/2003/InkML\">\n";
  out += "  <traceFormat>\n";
  out += "    <channel name=\"X\" type=\"decimal\"/>\n";
  out += "    <channel name=\"Y\" type=\"decimal\"/>\n";
  out += "    <channel name=\"T\" type=\"decimal\" units=\"s\"/>\n";
  out += "  </traceFormat>\n";
  for (const auto& ink : doc.inks) {
    out += "  <traceGroup>\n";
    for (const auto& [key, value] : ink.metadata) {
      out += "    <annotation type=\"" + xml::escape(key) + "\">" + xml::escape(value) +
             "</annotation>\n";
    }
    for (std::size_t s = 0; s < ink.strokes.size(); ++s) {
      out += "    <trace>";
      const auto& pts = ink.strokes[s].points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& p = pts[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.t))
          throw DataError("stroke " + std::to_string(s) + " has a non-finite value");
        if (i) out += ", ";
        out += detail::format_fixed(p.x);
        out += ' ';
        out += detail::format_fixed(p.y);
        out += ' ';
        out += detail::format_fixed(p.t);
      }
      out += "</trace>\n";
    }
    out += "  </traceGroup>\n";
  }
  out += "</ink>\n";
  return out;
}

InkmlDocument read_inkml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_inkml(ss.str());
}

void write_inkml_file(const std::filesystem::path& path, const InkmlDocument& doc) {
  const std::string text = serialize_inkml(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

DigitalInk read_ink_file(const std::filesystem::path& path) {
  auto doc = read_inkml_file(path);
  return doc.inks.empty() ? DigitalInk{} : std::move(doc.inks.front());
}

void write_ink_file(const std::filesystem::path& path, const DigitalInk& ink) {
  write_inkml_file(path, InkmlDocument{{ink}});
}

}  // namespace inkforge
