#pragma once

// Classical derendering baseline: Otsu binarization, Zhang-Suen thinning,
// skeleton graph extraction and greedy stroke tracing.

#include <cstddef>
#include <vector>

#include "inkforge/ink.hpp"
#include "inkforge/kernels.hpp"
#include "inkforge/raster.hpp"

namespace inkforge::geo {

using BinaryImage = kernels::Mask;

/// Luma (0.299 R + 0.587 G + 0.114 B), Otsu threshold, and the side holding
/// at most half of the pixels becomes foreground. Uniform images give an
/// empty mask.
BinaryImage binarize(const RasterImage& img);

/// Zhang-Suen thinning to convergence, followed by removal of redundant
/// staircase corners, repeated until neither step changes the mask. The
/// result is a fixed point, so skeletonize(skeletonize(b)) == skeletonize(b).
BinaryImage skeletonize(const BinaryImage& bin);

/// Number of 8-connected foreground components.
std::size_t count_components(const BinaryImage& bin);

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// End, junction, isolated or loop-anchor pixels. Adjacent junction pixels
/// form one node.
struct SkeletonNode {
  std::vector<Pixel> pixels;
  double cx = 0.0;  // centroid in continuous coordinates (pixel centers at +0.5)
  double cy = 0.0;
};

/// Chain of degree-2 pixels between two nodes, ordered from `from` to `to`.
/// Directly adjacent nodes are joined by an edge with no pixels.
struct SkeletonEdge {
  int from = 0;
  int to = 0;
  std::vector<Pixel> pixels;
};

struct SkeletonGraph {
  std::vector<SkeletonNode> nodes;
  std::vector<SkeletonEdge> edges;
  std::vector<std::vector<int>> incident;  // node -> edge ids
};

SkeletonGraph build_graph(const BinaryImage& skel);

struct EdgeStep {
  int edge = 0;
  bool reversed = false;  // walked from `to` towards `from`
};

struct StrokePath {
  int start_node = 0;
  std::vector<EdgeStep> steps;  // empty for an isolated node
};

/// Greedy traversal: start at the leftmost dangling node, follow edges, and
/// at each node continue along the unused edge with the smallest turning
/// angle. Every edge appears in exactly one step of one path.
std::vector<StrokePath> plan_strokes(const SkeletonGraph& graph);

/// Traced strokes in pixel-center coordinates, ordered by leftmost x,
/// simplified with epsilon 1 and given synthetic timestamps.
DigitalInk trace_strokes(const BinaryImage& skel);

/// binarize -> skeletonize -> trace_strokes, in image pixel coordinates.
DigitalInk derender_word(const RasterImage& img);

}  // namespace inkforge::geo
