#include "inkforge/geo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <utility>

#include "inkforge/normalize.hpp"

namespace inkforge::geo {
namespace {

// N, NE, E, SE, S, SW, W, NW
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

std::uint8_t get(const BinaryImage& m, int x, int y) {
  if (x < 0 || y < 0 || x >= m.width || y >= m.height) return 0;
  return m.bits[static_cast<std::size_t>(y) * m.width + x];
}

int degree(const BinaryImage& m, int x, int y) {
  int d = 0;
  for (int k = 0; k < 8; ++k) d += get(m, x + kDx[k], y + kDy[k]);
  return d;
}

/// Foreground neighbours of (x, y) form a single 8-connected group.
bool ring_connected(const BinaryImage& m, int x, int y) {
  std::array<bool, 8> on{};
  int count = 0;
  for (int k = 0; k < 8; ++k) count += on[k] = get(m, x + kDx[k], y + kDy[k]);
  if (count == 0) return false;
  std::array<bool, 8> seen{};
  std::vector<int> stack;
  for (int k = 0; k < 8; ++k)
    if (on[k]) {
      stack.push_back(k);
      seen[k] = true;
      break;
    }
  int reached = 0;
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    ++reached;
    for (int b = 0; b < 8; ++b) {
      if (!on[b] || seen[b]) continue;
      if (std::abs(kDx[a] - kDx[b]) <= 1 && std::abs(kDy[a] - kDy[b]) <= 1) {
        seen[b] = true;
        stack.push_back(b);
      }
    }
  }
  return reached == count;
}

/// Removes corner pixels of 4-connected staircases whose neighbours stay
/// connected without them. Sequential raster order, so results are stable.
std::size_t prune_corners(BinaryImage& m) {
  std::size_t removed = 0;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      if (!get(m, x, y) || degree(m, x, y) < 2) continue;
      const bool n = get(m, x, y - 1), e = get(m, x + 1, y), s = get(m, x, y + 1), w = get(m, x - 1, y);
      const bool corner = (n && e) || (e && s) || (s && w) || (w && n);
      if (!corner || !ring_connected(m, x, y)) continue;
      m.bits[static_cast<std::size_t>(y) * m.width + x] = 0;
      ++removed;
    }
  return removed;
}

double turning_angle(double ax, double ay, double bx, double by) {
  const double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
  if (na == 0.0 || nb == 0.0) return std::numbers::pi;
  return std::acos(std::clamp((ax * bx + ay * by) / (na * nb), -1.0, 1.0));
}

constexpr std::size_t kDirectionReach = 5;

struct Vec {
  double x, y;
};

Vec center(const Pixel& p) { return {p.x + 0.5, p.y + 0.5}; }

/// Point `kDirectionReach` samples into the edge when leaving `node`.
Vec probe_leaving(const SkeletonGraph& g, const SkeletonEdge& e, bool reversed) {
  if (e.pixels.empty()) {
    const auto& other = g.nodes[static_cast<std::size_t>(reversed ? e.from : e.to)];
    return {other.cx, other.cy};
  }
  const std::size_t k = std::min(kDirectionReach, e.pixels.size()) - 1;
  return center(reversed ? e.pixels[e.pixels.size() - 1 - k] : e.pixels[k]);
}

}  // namespace

BinaryImage binarize(const RasterImage& img) {
  BinaryImage out(img.width, img.height);
  const std::size_t total = static_cast<std::size_t>(img.width) * img.height;
  if (total == 0) return out;
  std::vector<std::uint8_t> gray(total);
  std::array<std::size_t, 256> hist{};
  for (std::size_t i = 0; i < total; ++i) {
    const double g = 0.299 * img.rgb[3 * i] + 0.587 * img.rgb[3 * i + 1] + 0.114 * img.rgb[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>(std::clamp(std::lround(g), 0l, 255l));
    ++hist[gray[i]];
  }
  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[static_cast<std::size_t>(v)];
  double best = 0.0;
  int threshold = -1;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[static_cast<std::size_t>(t)];
    sum0 += static_cast<double>(t) * hist[static_cast<std::size_t>(t)];
    const double w1 = static_cast<double>(total) - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0, m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      threshold = t;
    }
  }
  if (threshold < 0) return out;  // single intensity

  std::size_t dark = 0;
  for (int v = 0; v <= threshold; ++v) dark += hist[static_cast<std::size_t>(v)];
  const bool dark_is_ink = 2 * dark <= total;
  for (std::size_t i = 0; i < total; ++i) {
    const bool is_dark = gray[i] <= threshold;
    out.bits[i] = is_dark == dark_is_ink ? 1 : 0;
  }
  return out;
}

BinaryImage skeletonize(const BinaryImage& bin) {
  BinaryImage skel = bin;
  for (;;) {
    for (;;) {
      std::size_t changed = kernels::zhang_suen_pass(skel, 0);
      changed += kernels::zhang_suen_pass(skel, 1);
      if (changed == 0) break;
    }
    if (prune_corners(skel) == 0) break;
  }
  return skel;
}

std::size_t count_components(const BinaryImage& bin) {
  std::vector<char> seen(bin.bits.size(), 0);
  std::size_t components = 0;
  std::vector<Pixel> stack;
  for (int y = 0; y < bin.height; ++y)
    for (int x = 0; x < bin.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * bin.width + x;
      if (!bin.bits[i] || seen[i]) continue;
      ++components;
      seen[i] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kDx[k], ny = p.y + kDy[k];
          if (!get(bin, nx, ny)) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * bin.width + nx;
          if (seen[j]) continue;
          seen[j] = 1;
          stack.push_back({nx, ny});
        }
      }
    }
  return components;
}

SkeletonGraph build_graph(const BinaryImage& skel) {
  const int w = skel.width, h = skel.height;
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  std::vector<int> deg(skel.bits.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (get(skel, x, y)) deg[idx(x, y)] = degree(skel, x, y);

  // Pixels that are not plain chain links.
  std::vector<char> is_node(skel.bits.size(), 0);
  for (std::size_t i = 0; i < skel.bits.size(); ++i)
    if (skel.bits[i] && deg[i] != 2) is_node[i] = 1;

  // A component made only of degree-2 pixels is a closed loop; anchor it at
  // its leftmost (then topmost) pixel.
  {
    std::vector<char> seen(skel.bits.size(), 0);
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) {
        if (!get(skel, x, y) || seen[idx(x, y)]) continue;
        bool has_node = false;
        std::vector<Pixel> stack{{x, y}};
        seen[idx(x, y)] = 1;
        while (!stack.empty()) {
          const Pixel p = stack.back();
          stack.pop_back();
          has_node = has_node || is_node[idx(p.x, p.y)];
          for (int k = 0; k < 8; ++k) {
            const int nx = p.x + kDx[k], ny = p.y + kDy[k];
            if (get(skel, nx, ny) && !seen[idx(nx, ny)]) {
              seen[idx(nx, ny)] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
        if (!has_node) is_node[idx(x, y)] = 1;  // column-major scan: (x, y) is leftmost-topmost
      }
  }

  SkeletonGraph g;
  std::vector<int> node_of(skel.bits.size(), -1);
  // Junction pixels that touch each other share a node; everything else is a
  // node of its own.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = idx(x, y);
      if (!is_node[i] || node_of[i] >= 0) continue;
      const int id = static_cast<int>(g.nodes.size());
      g.nodes.emplace_back();
      node_of[i] = id;
      std::vector<Pixel> stack{{x, y}};
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        g.nodes.back().pixels.push_back(p);
        if (deg[idx(p.x, p.y)] < 3) continue;
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kDx[k], ny = p.y + kDy[k];
          if (!get(skel, nx, ny)) continue;
          const std::size_t j = idx(nx, ny);
          if (is_node[j] && deg[j] >= 3 && node_of[j] < 0) {
            node_of[j] = id;
            stack.push_back({nx, ny});
          }
        }
      }
    }

  // Chain pixels wedged between two pixels of one junction belong to it.
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::size_t i = idx(x, y);
        if (!skel.bits[i] || node_of[i] >= 0) continue;
        int owner = -2;
        bool same = true;
        for (int k = 0; k < 8 && same; ++k) {
          const int nx = x + kDx[k], ny = y + kDy[k];
          if (!get(skel, nx, ny)) continue;
          const int o = node_of[idx(nx, ny)];
          if (o < 0 || (owner != -2 && o != owner)) same = false;
          owner = o;
        }
        if (same && owner >= 0 && g.nodes[static_cast<std::size_t>(owner)].pixels.size() > 1) {
          node_of[i] = owner;
          g.nodes[static_cast<std::size_t>(owner)].pixels.push_back({x, y});
          changed = true;
        }
      }
  }

  for (auto& n : g.nodes) {
    double sx = 0.0, sy = 0.0;
    for (const auto& p : n.pixels) {
      sx += p.x + 0.5;
      sy += p.y + 0.5;
    }
    n.cx = sx / static_cast<double>(n.pixels.size());
    n.cy = sy / static_cast<double>(n.pixels.size());
  }

  std::vector<char> visited(skel.bits.size(), 0);
  std::set<std::pair<int, int>> direct;
  for (int u = 0; u < static_cast<int>(g.nodes.size()); ++u) {
    const auto pixels = g.nodes[static_cast<std::size_t>(u)].pixels;
    for (const Pixel& q : pixels) {
      for (int k = 0; k < 8; ++k) {
        const int rx = q.x + kDx[k], ry = q.y + kDy[k];
        if (!get(skel, rx, ry)) continue;
        const std::size_t r = idx(rx, ry);
        const int v = node_of[r];
        if (v >= 0) {
          if (v != u && direct.emplace(std::min(u, v), std::max(u, v)).second)
            g.edges.push_back({u, v, {}});
          continue;
        }
        if (visited[r]) continue;
        SkeletonEdge edge{u, u, {}};
        Pixel prev = q, cur{rx, ry};
        visited[r] = 1;
        edge.pixels.push_back(cur);
        // Chain pixels have exactly two neighbours: where we came from and
        // where we go next.
        for (;;) {
          int arrival = u;
          bool advanced = false;
          for (int j = 0; j < 8; ++j) {
            const int nx = cur.x + kDx[j], ny = cur.y + kDy[j];
            if (!get(skel, nx, ny) || (nx == prev.x && ny == prev.y)) continue;
            const std::size_t ni = idx(nx, ny);
            if (node_of[ni] >= 0) {
              arrival = node_of[ni];
              break;
            }
            if (visited[ni]) break;
            visited[ni] = 1;
            edge.pixels.push_back({nx, ny});
            prev = cur;
            cur = {nx, ny};
            advanced = true;
            break;
          }
          if (advanced) continue;
          edge.to = arrival;
          break;
        }
        g.edges.push_back(std::move(edge));
      }
    }
  }

  g.incident.assign(g.nodes.size(), {});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const auto& edge = g.edges[static_cast<std::size_t>(e)];
    g.incident[static_cast<std::size_t>(edge.from)].push_back(e);
    if (edge.to != edge.from) g.incident[static_cast<std::size_t>(edge.to)].push_back(e);
  }
  return g;
}

std::vector<StrokePath> plan_strokes(const SkeletonGraph& g) {
  std::vector<char> used(g.edges.size(), 0);
  std::vector<int> remaining(g.nodes.size(), 0);
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    for (int e : g.incident[n]) remaining[n] += g.edges[static_cast<std::size_t>(e)].from == g.edges[static_cast<std::size_t>(e)].to ? 2 : 1;

  auto consume = [&](int e) {
    used[static_cast<std::size_t>(e)] = 1;
    const auto& edge = g.edges[static_cast<std::size_t>(e)];
    --remaining[static_cast<std::size_t>(edge.from)];
    --remaining[static_cast<std::size_t>(edge.to)];
  };
  auto leftmost = [&](auto&& eligible) {
    int best = -1;
    for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
      if (!eligible(n)) continue;
      const auto& a = g.nodes[static_cast<std::size_t>(n)];
      if (best < 0) {
        best = n;
        continue;
      }
      const auto& b = g.nodes[static_cast<std::size_t>(best)];
      if (a.cx < b.cx || (a.cx == b.cx && a.cy < b.cy)) best = n;
    }
    return best;
  };

  std::vector<StrokePath> paths;
  for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n)
    if (g.incident[static_cast<std::size_t>(n)].empty()) paths.push_back({n, {}});

  for (;;) {
    int start = leftmost([&](int n) { return remaining[static_cast<std::size_t>(n)] == 1; });
    if (start < 0) start = leftmost([&](int n) { return remaining[static_cast<std::size_t>(n)] > 0; });
    if (start < 0) break;

    StrokePath path{start, {}};
    int cur = start;
    std::optional<Vec> heading;  // direction of travel when arriving at `cur`
    for (;;) {
      const auto& cn = g.nodes[static_cast<std::size_t>(cur)];
      int chosen = -1;
      bool chosen_rev = false;
      double best = std::numeric_limits<double>::infinity();
      for (int e : g.incident[static_cast<std::size_t>(cur)]) {
        if (used[static_cast<std::size_t>(e)]) continue;
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        const bool rev = edge.from != cur;
        double cost = 0.0;
        if (heading) {
          const Vec probe = probe_leaving(g, edge, rev);
          cost = turning_angle(heading->x, heading->y, probe.x - cn.cx, probe.y - cn.cy);
        }
        if (cost < best) {
          best = cost;
          chosen = e;
          chosen_rev = rev;
        }
        if (!heading) break;  // first unused edge starts the stroke
      }
      if (chosen < 0) break;
      consume(chosen);
      path.steps.push_back({chosen, chosen_rev});
      const auto& edge = g.edges[static_cast<std::size_t>(chosen)];
      const int next = chosen_rev ? edge.from : edge.to;
      const auto& nn = g.nodes[static_cast<std::size_t>(next)];
      // Arrival direction: from a point a few pixels back along the edge.
      Vec back{cn.cx, cn.cy};
      if (!edge.pixels.empty()) {
        const std::size_t k = std::min(kDirectionReach, edge.pixels.size()) - 1;
        back = center(chosen_rev ? edge.pixels[k] : edge.pixels[edge.pixels.size() - 1 - k]);
      }
      heading = Vec{nn.cx - back.x, nn.cy - back.y};
      cur = next;
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

DigitalInk trace_strokes(const BinaryImage& skel) {
  const SkeletonGraph g = build_graph(skel);
  const auto paths = plan_strokes(g);
  DigitalInk ink;
  for (const auto& path : paths) {
    Stroke s;
    auto add = [&s](double x, double y) {
      if (!s.points.empty() && s.points.back().x == x && s.points.back().y == y) return;
      s.points.push_back({x, y, 0.0});
    };
    const auto& start = g.nodes[static_cast<std::size_t>(path.start_node)];
    add(start.cx, start.cy);
    for (const auto& step : path.steps) {
      const auto& edge = g.edges[static_cast<std::size_t>(step.edge)];
      if (step.reversed) {
        for (auto it = edge.pixels.rbegin(); it != edge.pixels.rend(); ++it) add(it->x + 0.5, it->y + 0.5);
      } else {
        for (const auto& p : edge.pixels) add(p.x + 0.5, p.y + 0.5);
      }
      const auto& end = g.nodes[static_cast<std::size_t>(step.reversed ? edge.from : edge.to)];
      add(end.cx, end.cy);
    }
    ink.strokes.push_back(std::move(s));
  }
  auto left = [](const Stroke& s) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points) m = std::min(m, p.x);
    return m;
  };
  std::stable_sort(ink.strokes.begin(), ink.strokes.end(),
                   [&](const Stroke& a, const Stroke& b) { return left(a) < left(b); });
  ink = simplify(ink, {1.0});
  return hallucinate_time(ink);
}

DigitalInk derender_word(const RasterImage& img) {
  return trace_strokes(skeletonize(binarize(img)));
}

}  // namespace inkforge::geo
