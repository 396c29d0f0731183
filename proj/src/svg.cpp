#include "inkforge/svg.hpp"

#include <algorithm>

#include "format.hpp"

namespace inkforge {
namespace {

constexpr double kMaxHue = 300.0;
constexpr double kDarkest = 30.0;
constexpr double kLightest = 70.0;

std::string num(double v) { return detail::format_fixed(v, 3); }

std::string hsl(double hue, double lightness) {
  return "hsl(" + detail::format_fixed(hue, 1) + ",100%," + detail::format_fixed(lightness, 1) + "%)";
}

}  // namespace

std::string overlay_svg(const DigitalInk& ink, const std::vector<StrokeGroup>& groups, int width,
                        int height) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g fill=\"none\" stroke-width=\"1.5\" stroke-linecap=\"round\">\n";
  for (const auto& g : groups) {
    const std::size_t end = std::min(ink.strokes.size(), g.first + g.count);
    for (std::size_t s = g.first; s < end; ++s) {
      const double hue = g.count > 1 ? kMaxHue * static_cast<double>(s - g.first) / (g.count - 1) : 0.0;
      const auto& pts = ink.strokes[s].points;
      if (pts.size() == 1) {
        out += "<circle cx=\"" + num(pts[0].x) + "\" cy=\"" + num(pts[0].y) + "\" r=\"1\" fill=\"" +
               hsl(hue, kDarkest) + "\"/>\n";
        continue;
      }
      const std::size_t segments = pts.size() - 1;
      for (std::size_t j = 0; j < segments; ++j) {
        const double f = segments > 1 ? static_cast<double>(j) / (segments - 1) : 0.0;
        out += "<line x1=\"" + num(pts[j].x) + "\" y1=\"" + num(pts[j].y) + "\" x2=\"" +
               num(pts[j + 1].x) + "\" y2=\"" + num(pts[j + 1].y) + "\" stroke=\"" +
               hsl(hue, kDarkest + (kLightest - kDarkest) * f) + "\"/>\n";
      }
    }
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string overlay_svg(const DigitalInk& ink, int width, int height) {
  return overlay_svg(ink, {{0, ink.strokes.size()}}, width, height);
}

std::string overlay_svg(const page::PageResult& result, int width, int height) {
  std::vector<StrokeGroup> groups;
  for (const auto& w : result.words)
    if (w.stroke_count > 0) groups.push_back({w.first_stroke, w.stroke_count});
  return overlay_svg(result.ink, groups, width, height);
}

}  // namespace inkforge
