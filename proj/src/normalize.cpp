#include "inkforge/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "inkforge/error.hpp"

namespace inkforge {
namespace {

std::vector<Point> resample_stroke(const std::vector<Point>& pts, double period) {
  if (pts.size() < 2) return pts;
  const double t0 = pts.front().t;
  const double t_end = pts.back().t;
  // Guards against a tick landing a rounding error short of the last sample.
  const double slack = 1e-9 * period;

  std::vector<Point> out;
  std::size_t seg = 0;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * period;
    if (k > 0 && t >= t_end - slack) break;
    while (seg + 1 < pts.size() && pts[seg + 1].t < t) ++seg;
    if (seg + 1 >= pts.size()) break;
    const Point& a = pts[seg];
    const Point& b = pts[seg + 1];
    if (k == 0) {
      out.push_back(a);
      continue;
    }
    const double dt = b.t - a.t;
    const double u = dt > 0.0 ? (t - a.t) / dt : 1.0;
    out.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), t});
  }
  out.push_back(pts.back());
  return out;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

std::vector<Point> rdp_stroke(const std::vector<Point>& pts, double epsilon) {
  if (pts.size() < 3) return pts;
  std::vector<char> keep(pts.size(), 0);
  keep.front() = keep.back() = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, pts.size() - 1}};
  while (!stack.empty()) {
    auto [first, last] = stack.back();
    stack.pop_back();
    double worst = -1.0;
    std::size_t worst_at = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      double d = segment_distance(pts[i], pts[first], pts[last]);
      if (d > worst) {
        worst = d;
        worst_at = i;
      }
    }
    if (worst > epsilon) {
      keep[worst_at] = 1;
      if (worst_at - first > 1) stack.emplace_back(first, worst_at);
      if (last - worst_at > 1) stack.emplace_back(worst_at, last);
    }
  }
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) out.push_back(pts[i]);
  return out;
}

}  // namespace

DigitalInk resample_time(const DigitalInk& ink, const ResampleSpec& spec) {
  if (!(spec.period > 0.0) || !std::isfinite(spec.period))
    throw DataError("resample period must be positive");
  if (ink.has_synthetic_time()) {
    DigitalInk out = ink;
    out.metadata[kResampleSkippedKey] = "synthetic_time";
    return out;
  }
  DigitalInk out;
  out.metadata = ink.metadata;
  out.strokes.reserve(ink.strokes.size());
  for (std::size_t s = 0; s < ink.strokes.size(); ++s) {
    const auto& pts = ink.strokes[s].points;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].t < pts[i - 1].t)
        throw DataError("stroke " + std::to_string(s) + " has decreasing timestamps");
    out.strokes.push_back({resample_stroke(pts, spec.period)});
  }
  return out;
}

DigitalInk simplify(const DigitalInk& ink, const SimplifySpec& spec) {
  if (!(spec.epsilon >= 0.0)) throw DataError("simplify epsilon must be non-negative");
  if (spec.epsilon == 0.0) return ink;
  DigitalInk out;
  out.metadata = ink.metadata;
  out.strokes.reserve(ink.strokes.size());
  for (const auto& stroke : ink.strokes) out.strokes.push_back({rdp_stroke(stroke.points, spec.epsilon)});
  return out;
}

FittedInk fit_to_canvas(const DigitalInk& ink, int n) {
  if (n <= 0) throw DataError("canvas size must be positive");
  if (total_points(ink) == 0) throw DataError("cannot fit an empty ink to the canvas");
  const BoundingBox box = bounds(ink);
  const double extent = std::max(box.width(), box.height());
  const double side = static_cast<double>(n);
  CanvasTransform map;
  map.canvas_size = n;
  if (extent > 0.0) {
    map.scale = side / extent;
    map.offset_x = 0.5 * (side - box.width() * map.scale) - box.x_min * map.scale;
    map.offset_y = 0.5 * (side - box.height() * map.scale) - box.y_min * map.scale;
  } else {
    map.scale = 1.0;
    map.offset_x = 0.5 * side - box.x_min;
    map.offset_y = 0.5 * side - box.y_min;
  }
  return {transform(ink, map), map};
}

DigitalInk hallucinate_time(const DigitalInk& ink, double period) {
  if (!(period > 0.0)) throw DataError("sampling period must be positive");
  DigitalInk out = ink;
  if (out.strokes.empty()) return out;
  std::size_t tick = 0;
  for (auto& stroke : out.strokes) {
    for (auto& p : stroke.points) p.t = static_cast<double>(tick++) * period;
    ++tick;
  }
  out.metadata[kSyntheticTimeKey] = "true";
  return out;
}

DigitalInk rotate(const DigitalInk& ink, double radians) {
  if (radians == 0.0 || total_points(ink) == 0) return ink;
  const BoundingBox box = bounds(ink);
  const double cx = 0.5 * (box.x_min + box.x_max);
  const double cy = 0.5 * (box.y_min + box.y_max);
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  DigitalInk out = ink;
  for (auto& stroke : out.strokes) {
    for (auto& p : stroke.points) {
      const double dx = p.x - cx;
      const double dy = p.y - cy;
      p.x = cx + c * dx - s * dy;
      p.y = cy + s * dx + c * dy;
    }
  }
  return out;
}

FittedInk normalize(const DigitalInk& ink, const NormalizeOptions& options) {
  DigitalInk work = resample_time(ink, options.resample);
  if (total_points(work) == 0) throw DataError("cannot normalize an empty ink");
  if (options.simplify.epsilon > 0.0) {
    const BoundingBox box = bounds(work);
    const double extent = std::max(box.width(), box.height());
    const double to_source = extent > 0.0 ? extent / options.canvas_size : 1.0;
    work = simplify(work, {options.simplify.epsilon * to_source});
  }
  work = rotate(work, options.rotation_rad);
  return fit_to_canvas(work, options.canvas_size);
}

}  // namespace inkforge
