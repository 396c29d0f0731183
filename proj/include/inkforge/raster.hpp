#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inkforge/ink.hpp"

namespace inkforge {

/// Row-major interleaved 8-bit RGB.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  RasterImage() = default;
  RasterImage(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  bool empty() const noexcept { return width <= 0 || height <= 0; }
  std::array<std::uint8_t, 3> at(int x, int y) const;
  void set(int x, int y, std::array<std::uint8_t, 3> color);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

using Rgb = std::array<double, 3>;  // each channel in [0, 1]

struct LineOverlay {
  double line_width_px = 1.0;  // [1, 6]
  double spacing_px = 10.0;    // [10, 100]
  Rgb rgb{0.0, 0.0, 0.0};

  friend bool operator==(const LineOverlay&, const LineOverlay&) = default;
};

struct AugmentationSpec {
  double rotation_rad = 0.0;  // [-pi/4, pi/4]
  Rgb stroke_rgb{0.0, 0.0, 0.0};
  Rgb background_rgb{1.0, 1.0, 1.0};
  double stroke_width_px = 3.0;  // [1, 12]
  std::optional<LineOverlay> lines;  // horizontal ruling
  std::optional<LineOverlay> grids;  // horizontal and vertical ruling
  std::optional<double> gaussian_noise_std;  // [50, 500] on the 8-bit scale
  double box_blur_radius_px = 0.0;  // [0, 5]
  std::uint64_t rng_seed = 0;

  friend bool operator==(const AugmentationSpec&, const AugmentationSpec&) = default;
};

/// Probability that each optional augmentation is switched on when sampling.
struct AugmentationProbabilities {
  double lines = 0.25;
  double grids = 0.25;
  double noise = 0.5;
  double blur = 0.5;
};

/// Throws DataError naming the first field outside its allowed range.
void validate(const AugmentationSpec& spec);

/// Draws every field uniformly from its range; optional parts are enabled
/// with the given probabilities. Deterministic in the seed.
AugmentationSpec sample_augmentation(std::uint64_t rng_seed,
                                     const AugmentationProbabilities& probabilities = {});

/// Renders a canvas-fitted ink onto an m x m image: background, ruling,
/// round-capped strokes, then noise, then blur. `spec.rotation_rad` is not
/// applied here; rotate the ink before fitting it (see prepare_for_render).
/// Throws DataError when m < 8 or the spec is out of range.
RasterImage render(const DigitalInk& ink, int m, const AugmentationSpec& spec);

/// Applies the spec's rotation to raw ink and fits the result to [0, m]^2.
DigitalInk prepare_for_render(const DigitalInk& ink, int m, const AugmentationSpec& spec);

struct FittedImage {
  RasterImage image;
  CanvasTransform transform;  // source pixel coordinates -> model canvas
};

/// Aspect-preserving resize so the larger side equals m, centered, padded
/// with black. Throws DataError on a zero-size image.
FittedImage fit_image(const RasterImage& img, int m);

/// Sub-image [x0, x0 + w) x [y0, y0 + h), clamped to the image.
RasterImage crop(const RasterImage& img, int x0, int y0, int w, int h);

/// Flat `key=value` text record, one field per line, fixed key order.
std::string format_augmentation(const AugmentationSpec& spec);
/// Throws ParseError/ValueError on malformed records; missing optional
/// overlays mean "off".
AugmentationSpec parse_augmentation(std::string_view text);

}  // namespace inkforge
