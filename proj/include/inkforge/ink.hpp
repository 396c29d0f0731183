#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace inkforge {

/// A pen sample. y grows downward (image convention) in every coordinate space.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;  // seconds

  friend bool operator==(const Point&, const Point&) = default;
};

struct Stroke {
  std::vector<Point> points;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

using Metadata = std::map<std::string, std::string>;

/// Metadata key set when timestamps were assigned rather than recorded.
inline constexpr const char* kSyntheticTimeKey = "synthetic_time";

struct DigitalInk {
  std::vector<Stroke> strokes;
  Metadata metadata;

  bool empty() const noexcept { return strokes.empty(); }
  bool has_synthetic_time() const;

  friend bool operator==(const DigitalInk&, const DigitalInk&) = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }
  bool valid() const noexcept;
  bool contains(const BoundingBox& other) const noexcept;
  /// Same center, sides multiplied by `factor`.
  BoundingBox scaled_about_center(double factor) const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Uniform scale followed by translation: p' = scale * p + offset.
///
/// `canvas_size` records the side of the square frame the map targets (N for
/// ink canvases, M for images). It does not take part in the arithmetic.
struct CanvasTransform {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  int canvas_size = 0;

  Point apply(const Point& p) const noexcept {
    return {scale * p.x + offset_x, scale * p.y + offset_y, p.t};
  }
  /// Throws DataError when the scale is zero or not finite.
  CanvasTransform inverse() const;
  /// The map `p -> outer.apply(this->apply(p))`.
  CanvasTransform then(const CanvasTransform& outer) const noexcept;
  bool is_valid() const noexcept;

  static CanvasTransform identity(int canvas_size = 0) { return {1.0, 0.0, 0.0, canvas_size}; }
};

/// Tight axis-aligned box over every point. Throws DataError on an ink with no points.
BoundingBox bounds(const DigitalInk& ink);

/// Maps every point; timestamps, stroke structure and metadata are kept.
DigitalInk transform(const DigitalInk& ink, const CanvasTransform& map);

std::size_t total_points(const DigitalInk& ink) noexcept;

/// Checks the value invariants: non-empty strokes, finite coordinates,
/// finite non-negative and non-decreasing timestamps. Returns an empty string
/// when the ink is valid, otherwise a description of the first violation.
std::string check_invariants(const DigitalInk& ink);

}  // namespace inkforge
