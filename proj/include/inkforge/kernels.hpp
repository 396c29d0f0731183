#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference in `serial` and an OpenMP version in `parallel`. The two produce
// bit-identical output for the same input; tests check this and the bench
// target compares their speed. The unqualified names dispatch to `parallel`.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace inkforge::kernels {

struct Segment {
  double x0, y0, x1, y1;
};

struct Vec2 {
  double x, y;
};

/// Interleaved RGB, channel values nominally in [0, 1].
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;

  FloatImage() = default;
  FloatImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0.0f) {}
};

/// 8-bit interleaved RGB view used by the resampler.
struct ByteImageView {
  int width;
  int height;
  std::span<const std::uint8_t> rgb;
};

/// Dense binary mask, 1 = foreground.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  friend bool operator==(const Mask&, const Mask&) = default;
};

/// Counter-based hash; the noise kernel draws every sample from it so the
/// result does not depend on iteration order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace serial {

/// Anti-aliased capsule coverage: out[p] = max over segments of
/// clamp(half_width + 0.5 - distance(pixel center, segment), 0, 1).
void stroke_coverage(std::span<const Segment> segments, double half_width, int width,
                     int height, std::span<float> out);
/// Separable box blur with fractional radius and clamped edges.
void box_blur(FloatImage& img, double radius);
/// Adds N(0, sigma / 255) to every channel sample, then clamps to [0, 1].
void add_gaussian_noise(FloatImage& img, double sigma_255, std::uint64_t seed);
/// One Zhang-Suen sub-iteration (0 or 1). Returns the number of deleted pixels.
std::size_t zhang_suen_pass(Mask& mask, int sub_iteration);
/// out[i] = distance from from[i] to its nearest point in `to`.
void nearest_distances(std::span<const Vec2> from, std::span<const Vec2> to,
                       std::span<double> out);
/// Area-weighted resampling of `src` under p' = scale * p + offset into a
/// dst_w x dst_h image; area outside the source counts as black.
void resample_area(ByteImageView src, double scale, double offset_x, double offset_y,
                   int dst_w, int dst_h, std::span<std::uint8_t> dst);

}  // namespace serial

namespace parallel {

/// Same contracts as the serial versions.
void stroke_coverage(std::span<const Segment> segments, double half_width, int width,
                     int height, std::span<float> out);
void box_blur(FloatImage& img, double radius);
void add_gaussian_noise(FloatImage& img, double sigma_255, std::uint64_t seed);
std::size_t zhang_suen_pass(Mask& mask, int sub_iteration);
void nearest_distances(std::span<const Vec2> from, std::span<const Vec2> to,
                       std::span<double> out);
void resample_area(ByteImageView src, double scale, double offset_x, double offset_y,
                   int dst_w, int dst_h, std::span<std::uint8_t> dst);

}  // namespace parallel

using parallel::add_gaussian_noise;
using parallel::box_blur;
using parallel::nearest_distances;
using parallel::resample_area;
using parallel::stroke_coverage;
using parallel::zhang_suen_pass;

}  // namespace inkforge::kernels
