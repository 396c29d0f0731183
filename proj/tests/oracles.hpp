#pragma once

// Independent reference implementations and fixture builders shared by the
// unit tests and the acceptance binary. Nothing here calls the code under
// test except to assemble inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "inkforge/eval.hpp"
#include "inkforge/ink.hpp"
#include "inkforge/raster.hpp"

namespace oracle {

using inkforge::DigitalInk;
using inkforge::Point;
using inkforge::Stroke;

using Polyline = std::vector<std::pair<double, double>>;

/// Ink from coordinate lists; timestamps advance 20 ms per point within a
/// stroke and restart at zero for each stroke.
inline DigitalInk ink_of(const std::vector<Polyline>& strokes) {
  DigitalInk ink;
  for (const auto& s : strokes) {
    Stroke st;
    for (std::size_t i = 0; i < s.size(); ++i)
      st.points.push_back({s[i].first, s[i].second, 0.02 * static_cast<double>(i)});
    ink.strokes.push_back(std::move(st));
  }
  return ink;
}

inline DigitalInk random_ink(std::mt19937_64& rng, int max_strokes, int max_points,
                             double extent = 500.0) {
  std::uniform_int_distribution<int> strokes(1, max_strokes);
  std::uniform_int_distribution<int> points(1, max_points);
  std::uniform_real_distribution<double> coord(-extent, extent);
  std::uniform_real_distribution<double> dt(0.001, 0.05);
  DigitalInk ink;
  const int ns = strokes(rng);
  for (int s = 0; s < ns; ++s) {
    Stroke st;
    double t = 0.0;
    const int np = points(rng);
    for (int p = 0; p < np; ++p) {
      st.points.push_back({coord(rng), coord(rng), t});
      t += dt(rng);
    }
    ink.strokes.push_back(std::move(st));
  }
  return ink;
}

// ---------------------------------------------------------------------------
// Ramer-Douglas-Peucker, written as the textbook recursion.

inline double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double wx = p.x - a.x, wy = p.y - a.y;
  const double c1 = vx * wx + vy * wy;
  if (c1 <= 0.0) return std::hypot(wx, wy);
  const double c2 = vx * vx + vy * vy;
  if (c2 <= c1) return std::hypot(p.x - b.x, p.y - b.y);
  const double f = c1 / c2;
  return std::hypot(p.x - (a.x + f * vx), p.y - (a.y + f * vy));
}

inline void rdp_recurse(const std::vector<Point>& pts, std::size_t lo, std::size_t hi, double eps,
                        std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double best = -1.0;
  std::size_t at = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = distance_to_segment(pts[i], pts[lo], pts[hi]);
    if (d > best) {
      best = d;
      at = i;
    }
  }
  if (best > eps) {
    keep[at] = true;
    rdp_recurse(pts, lo, at, eps, keep);
    rdp_recurse(pts, at, hi, eps, keep);
  }
}

inline std::vector<Point> rdp(const std::vector<Point>& pts, double eps) {
  if (pts.size() <= 2 || eps <= 0.0) return pts;
  std::vector<bool> keep(pts.size(), false);
  keep.front() = keep.back() = true;
  rdp_recurse(pts, 0, pts.size() - 1, eps, keep);
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) out.push_back(pts[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Maximum one-to-one matching by exhaustive search.

inline bool qualifies(const inkforge::eval::CharBox& p, const inkforge::eval::CharBox& t,
                      double threshold) {
  if (p.character != t.character) return false;
  const double ix = std::max(0.0, std::min(p.box.x_max, t.box.x_max) - std::max(p.box.x_min, t.box.x_min));
  const double iy = std::max(0.0, std::min(p.box.y_max, t.box.y_max) - std::max(p.box.y_min, t.box.y_min));
  const double inter = ix * iy;
  const double uni = p.box.area() + t.box.area() - inter;
  return uni > 0.0 && inter / uni >= threshold;
}

inline std::size_t best_matching(const std::vector<inkforge::eval::CharBox>& pred,
                                 const std::vector<inkforge::eval::CharBox>& truth, double threshold,
                                 std::size_t i, std::vector<bool>& used) {
  if (i == pred.size()) return 0;
  std::size_t best = best_matching(pred, truth, threshold, i + 1, used);
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (used[j] || !qualifies(pred[i], truth[j], threshold)) continue;
    used[j] = true;
    best = std::max(best, 1 + best_matching(pred, truth, threshold, i + 1, used));
    used[j] = false;
  }
  return best;
}

inline std::size_t optimal_match_count(const std::vector<inkforge::eval::CharBox>& pred,
                                       const std::vector<inkforge::eval::CharBox>& truth,
                                       double threshold) {
  std::vector<bool> used(truth.size(), false);
  return best_matching(pred, truth, threshold, 0, used);
}

// ---------------------------------------------------------------------------
// Zhang-Suen thinning on a padded 2-D grid, one sub-iteration at a time.
// A 2x2 block whose four pixels are all marked keeps its bottom-right pixel.

using Grid = std::vector<std::vector<int>>;  // [y][x]

inline int cell(const Grid& g, int x, int y) {
  if (y < 0 || y >= static_cast<int>(g.size()) || x < 0 || x >= static_cast<int>(g[0].size())) return 0;
  return g[y][x];
}

inline int zs_pass(Grid& g, int sub) {
  const int h = static_cast<int>(g.size());
  const int w = h ? static_cast<int>(g[0].size()) : 0;
  Grid marked(h, std::vector<int>(w, 0));
  // clockwise from north: p2..p9
  const int dx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  const int dy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!g[y][x]) continue;
      int p[8];
      int b = 0;
      for (int k = 0; k < 8; ++k) b += p[k] = cell(g, x + dx[k], y + dy[k]);
      int a = 0;
      for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1);
      const int n = p[0], e = p[2], s = p[4], wv = p[6];
      const bool c = sub == 0 ? (n * e * s == 0 && e * s * wv == 0) : (n * e * wv == 0 && n * s * wv == 0);
      if (b >= 2 && b <= 6 && a == 1 && c) marked[y][x] = 1;
    }
  int deleted = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!marked[y][x]) continue;
      const bool block = x > 0 && y > 0 && marked[y - 1][x] && marked[y][x - 1] && marked[y - 1][x - 1];
      if (block) continue;
      g[y][x] = 0;
      ++deleted;
    }
  return deleted;
}

inline void zs_thin(Grid& g) {
  while (true) {
    const int a = zs_pass(g, 0);
    const int b = zs_pass(g, 1);
    if (a + b == 0) break;
  }
}

inline int count_components(const Grid& g) {
  const int h = static_cast<int>(g.size());
  const int w = h ? static_cast<int>(g[0].size()) : 0;
  Grid seen(h, std::vector<int>(w, 0));
  int count = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!g[y][x] || seen[y][x]) continue;
      ++count;
      std::vector<std::pair<int, int>> stack{{x, y}};
      seen[y][x] = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int oy = -1; oy <= 1; ++oy)
          for (int ox = -1; ox <= 1; ++ox) {
            const int nx = cx + ox, ny = cy + oy;
            if (cell(g, nx, ny) && !seen[ny][nx]) {
              seen[ny][nx] = 1;
              stack.push_back({nx, ny});
            }
          }
      }
    }
  return count;
}

// ---------------------------------------------------------------------------
// Geometric fixtures: lines, L shapes, zigzags and two-stroke crosses,
// all inside [margin, size - margin]^2.

inline std::vector<DigitalInk> geometric_fixtures(int size = 96) {
  std::vector<DigitalInk> out;
  const double lo = 16.0, hi = size - 16.0, mid = size / 2.0;
  // 5 lines
  out.push_back(ink_of({{{lo, mid}, {hi, mid}}}));
  out.push_back(ink_of({{{mid, lo}, {mid, hi}}}));
  out.push_back(ink_of({{{lo, lo}, {hi, hi}}}));
  out.push_back(ink_of({{{lo, hi}, {hi, lo}}}));
  out.push_back(ink_of({{{lo, mid - 10}, {hi, mid + 14}}}));
  // 5 L shapes
  out.push_back(ink_of({{{lo, lo}, {lo, hi}, {hi, hi}}}));
  out.push_back(ink_of({{{hi, lo}, {hi, hi}, {lo, hi}}}));
  out.push_back(ink_of({{{lo, lo}, {hi, lo}, {hi, hi}}}));
  out.push_back(ink_of({{{lo, hi}, {lo, lo}, {hi, lo}}}));
  out.push_back(ink_of({{{lo, mid}, {mid, mid}, {mid, hi}}}));
  // 5 zigzags
  out.push_back(ink_of({{{lo, hi}, {lo + 16, lo}, {lo + 32, hi}, {lo + 48, lo}, {hi, hi}}}));
  out.push_back(ink_of({{{lo, lo}, {mid, hi}, {hi, lo}}}));
  out.push_back(ink_of({{{lo, mid}, {lo + 20, lo}, {lo + 40, hi}, {hi, mid}}}));
  out.push_back(ink_of({{{lo, lo}, {hi, lo + 16}, {lo, lo + 32}, {hi, lo + 48}, {lo, hi}}}));
  out.push_back(ink_of({{{lo, hi}, {lo + 21, lo + 10}, {lo + 42, hi - 10}, {hi, lo}}}));
  // 5 crosses
  out.push_back(ink_of({{{lo, mid}, {hi, mid}}, {{mid, lo}, {mid, hi}}}));
  out.push_back(ink_of({{{lo, lo}, {hi, hi}}, {{lo, hi}, {hi, lo}}}));
  out.push_back(ink_of({{{lo, mid - 12}, {hi, mid - 12}}, {{mid + 8, lo}, {mid + 8, hi}}}));
  out.push_back(ink_of({{{lo + 4, mid + 10}, {hi - 4, mid + 10}}, {{mid - 10, lo + 4}, {mid - 10, hi - 4}}}));
  out.push_back(ink_of({{{lo, mid}, {hi, mid}}, {{lo + 20, lo}, {lo + 20, hi}}}));
  return out;
}

/// Black strokes of the given width on white, ink drawn at its own coordinates.
inline inkforge::RasterImage render_plain(const DigitalInk& ink, int size, double width) {
  inkforge::AugmentationSpec spec;
  spec.stroke_width_px = width;
  return inkforge::render(ink, size, spec);
}

}  // namespace oracle
