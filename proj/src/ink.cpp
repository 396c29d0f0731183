#include "inkforge/ink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inkforge/error.hpp"

namespace inkforge {

bool DigitalInk::has_synthetic_time() const {
  auto it = metadata.find(kSyntheticTimeKey);
  return it != metadata.end() && it->second == "true";
}

bool BoundingBox::valid() const noexcept {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

bool BoundingBox::contains(const BoundingBox& other) const noexcept {
  return other.x_min >= x_min && other.y_min >= y_min && other.x_max <= x_max &&
         other.y_max <= y_max;
}

BoundingBox BoundingBox::scaled_about_center(double factor) const noexcept {
  const double cx = 0.5 * (x_min + x_max);
  const double cy = 0.5 * (y_min + y_max);
  const double hw = 0.5 * width() * factor;
  const double hh = 0.5 * height() * factor;
  return {cx - hw, cy - hh, cx + hw, cy + hh};
}

CanvasTransform CanvasTransform::inverse() const {
  if (!is_valid()) throw DataError("transform is not invertible");
  return {1.0 / scale, -offset_x / scale, -offset_y / scale, canvas_size};
}

CanvasTransform CanvasTransform::then(const CanvasTransform& outer) const noexcept {
  return {outer.scale * scale, outer.scale * offset_x + outer.offset_x,
          outer.scale * offset_y + outer.offset_y, outer.canvas_size};
}

bool CanvasTransform::is_valid() const noexcept {
  return std::isfinite(scale) && scale != 0.0 && std::isfinite(offset_x) &&
         std::isfinite(offset_y);
}

BoundingBox bounds(const DigitalInk& ink) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BoundingBox box{inf, inf, -inf, -inf};
  bool any = false;
  for (const auto& stroke : ink.strokes) {
    for (const auto& p : stroke.points) {
      box.x_min = std::min(box.x_min, p.x);
      box.y_min = std::min(box.y_min, p.y);
      box.x_max = std::max(box.x_max, p.x);
      box.y_max = std::max(box.y_max, p.y);
      any = true;
    }
  }
  if (!any) throw DataError("empty ink has no bounds");
  return box;
}

DigitalInk transform(const DigitalInk& ink, const CanvasTransform& map) {
  if (!map.is_valid()) throw DataError("transform scale must be finite and nonzero");
  DigitalInk out;
  out.metadata = ink.metadata;
  out.strokes.reserve(ink.strokes.size());
  for (const auto& stroke : ink.strokes) {
    Stroke s;
    s.points.reserve(stroke.points.size());
    for (const auto& p : stroke.points) s.points.push_back(map.apply(p));
    out.strokes.push_back(std::move(s));
  }
  return out;
}

std::size_t total_points(const DigitalInk& ink) noexcept {
  std::size_t n = 0;
  for (const auto& s : ink.strokes) n += s.points.size();
  return n;
}

std::string check_invariants(const DigitalInk& ink) {
  for (std::size_t i = 0; i < ink.strokes.size(); ++i) {
    const auto& pts = ink.strokes[i].points;
    const std::string where = "stroke " + std::to_string(i);
    if (pts.empty()) return where + " is empty";
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Point& p = pts[j];
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        return where + " point " + std::to_string(j) + " has a non-finite coordinate";
      if (!std::isfinite(p.t) || p.t < 0.0)
        return where + " point " + std::to_string(j) + " has an invalid timestamp";
      if (j > 0 && p.t < pts[j - 1].t)
        return where + " point " + std::to_string(j) + " goes back in time";
    }
  }
  return {};
}

}  // namespace inkforge
