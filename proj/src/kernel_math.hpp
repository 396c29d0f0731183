#pragma once

// Per-element arithmetic shared by the serial and parallel kernels. Keeping
// it in one place is what makes the two variants bit-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "inkforge/kernels.hpp"

namespace inkforge::kernels::detail {

inline double segment_distance(double px, double py, const Segment& s) {
  const double dx = s.x1 - s.x0;
  const double dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((px - s.x0) * dx + (py - s.y0) * dy) / len2, 0.0, 1.0);
  const double ex = px - (s.x0 + u * dx);
  const double ey = py - (s.y0 + u * dy);
  return std::sqrt(ex * ex + ey * ey);
}

inline float capsule_coverage(int x, int y, const Segment& s, double half_width) {
  const double d = segment_distance(x + 0.5, y + 0.5, s);
  return static_cast<float>(std::clamp(half_width + 0.5 - d, 0.0, 1.0));
}

/// Inclusive pixel range a segment can touch along one axis.
inline void pixel_span(double a, double b, double half_width, int limit, int& lo, int& hi) {
  lo = std::max(0, static_cast<int>(std::floor(std::min(a, b) - half_width - 1.0)));
  hi = std::min(limit - 1, static_cast<int>(std::ceil(std::max(a, b) + half_width + 1.0)));
}

struct BlurTaps {
  int reach = 0;  // taps span [-reach, reach]
  double edge_weight = 0.0;
  double norm = 1.0;
};

inline BlurTaps blur_taps(double radius) {
  BlurTaps t;
  const double whole = std::floor(radius);
  const double frac = radius - whole;
  t.reach = static_cast<int>(whole) + (frac > 0.0 ? 1 : 0);
  t.edge_weight = frac > 0.0 ? frac : 1.0;
  t.norm = 2.0 * whole + 1.0 + 2.0 * frac;
  return t;
}

/// Blurred value of one channel sample along a line of `count` samples
/// starting at `base` with the given stride.
inline float blur_sample(const float* base, int count, std::size_t stride, int i, const BlurTaps& t) {
  double acc = 0.0;
  for (int k = -t.reach; k <= t.reach; ++k) {
    const int j = std::clamp(i + k, 0, count - 1);
    const double w = (k == -t.reach || k == t.reach) ? t.edge_weight : 1.0;
    acc += w * base[static_cast<std::size_t>(j) * stride];
  }
  return static_cast<float>(acc / t.norm);
}

inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline float noisy(float value, std::size_t sample, double sigma, std::uint64_t seed) {
  const std::uint64_t s = static_cast<std::uint64_t>(sample);
  const double u1 = unit_open(mix64(seed ^ mix64(2 * s)));
  const double u2 = unit_open(mix64(seed ^ mix64(2 * s + 1)));
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return static_cast<float>(std::clamp(value + sigma * z, 0.0, 1.0));
}

inline std::uint8_t pixel(const Mask& m, int x, int y) {
  if (x < 0 || y < 0 || x >= m.width || y >= m.height) return 0;
  return m.bits[static_cast<std::size_t>(y) * m.width + x];
}

/// Zhang-Suen deletion test for a foreground pixel.
inline bool zhang_suen_deletable(const Mask& m, int x, int y, int sub_iteration) {
  // p9 p2 p3
  // p8 p1 p4
  // p7 p6 p5
  const int p2 = pixel(m, x, y - 1), p3 = pixel(m, x + 1, y - 1), p4 = pixel(m, x + 1, y);
  const int p5 = pixel(m, x + 1, y + 1), p6 = pixel(m, x, y + 1), p7 = pixel(m, x - 1, y + 1);
  const int p8 = pixel(m, x - 1, y), p9 = pixel(m, x - 1, y - 1);
  const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
  if (b < 2 || b > 6) return false;
  const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) + (!p6 && p7) +
                (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
  if (a != 1) return false;
  if (sub_iteration == 0) return (p2 * p4 * p6) == 0 && (p4 * p6 * p8) == 0;
  return (p2 * p4 * p8) == 0 && (p2 * p6 * p8) == 0;
}

/// A marked pixel survives when it is the bottom-right corner of a 2x2 block
/// whose four pixels are all marked; plain Zhang-Suen would erase the block.
inline bool rescued(const std::vector<std::uint8_t>& marks, int w, int x, int y) {
  if (x == 0 || y == 0) return false;
  auto at = [&](int cx, int cy) { return marks[static_cast<std::size_t>(cy) * w + cx]; };
  return at(x, y) && at(x - 1, y) && at(x, y - 1) && at(x - 1, y - 1);
}

inline double nearest(const Vec2& p, const Vec2* to, std::size_t n) {
  double best = INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = p.x - to[j].x;
    const double dy = p.y - to[j].y;
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

inline void resample_pixel(const ByteImageView& src, double scale, double ox, double oy, int i,
                           int j, std::uint8_t* out) {
  const double sx0 = (i - ox) / scale, sx1 = (i + 1 - ox) / scale;
  const double sy0 = (j - oy) / scale, sy1 = (j + 1 - oy) / scale;
  const double area = (sx1 - sx0) * (sy1 - sy0);
  double acc[3] = {0.0, 0.0, 0.0};
  const int ax0 = std::max(0, static_cast<int>(std::floor(sx0)));
  const int ax1 = std::min(src.width, static_cast<int>(std::ceil(sx1)));
  const int ay0 = std::max(0, static_cast<int>(std::floor(sy0)));
  const int ay1 = std::min(src.height, static_cast<int>(std::ceil(sy1)));
  for (int b = ay0; b < ay1; ++b) {
    const double wy = std::min(sy1, b + 1.0) - std::max(sy0, static_cast<double>(b));
    if (wy <= 0.0) continue;
    for (int a = ax0; a < ax1; ++a) {
      const double wx = std::min(sx1, a + 1.0) - std::max(sx0, static_cast<double>(a));
      if (wx <= 0.0) continue;
      const std::uint8_t* px = &src.rgb[(static_cast<std::size_t>(b) * src.width + a) * 3];
      for (int c = 0; c < 3; ++c) acc[c] += wx * wy * px[c];
    }
  }
  for (int c = 0; c < 3; ++c)
    out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[c] / area), 0l, 255l));
}

}  // namespace inkforge::kernels::detail
