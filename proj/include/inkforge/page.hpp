#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inkforge/ink.hpp"
#include "inkforge/raster.hpp"
#include "inkforge/tokens.hpp"

namespace inkforge::page {

struct WordBox {
  BoundingBox box;  // page pixels
  std::optional<std::string> label;
  std::optional<double> rotation;  // radians, about the box center
};

struct BackendOutput {
  DigitalInk ink;  // canvas coordinates, [0, m]^2
  std::vector<std::string> diagnostics;
};

/// A derendering backend. `derender` may be called concurrently from
/// several threads and reports failures by throwing.
class DerenderBackend {
 public:
  virtual ~DerenderBackend() = default;
  virtual bool accepts_text_prompt() const = 0;
  virtual BackendOutput derender(const RasterImage& image,
                                 const std::optional<std::string>& label) const = 0;
};

/// Classical skeleton-tracing derenderer. Exact-black border rows and
/// columns (fit_image padding) are trimmed before binarization.
class GeoBackend final : public DerenderBackend {
 public:
  bool accepts_text_prompt() const override { return false; }
  BackendOutput derender(const RasterImage& image,
                         const std::optional<std::string>& label) const override;
};

/// External model behind the file protocol in docs/formats/backend-protocol.md.
/// `command` is run through the shell with the work directory appended as a
/// single-quoted argument.
class SubprocessBackend final : public DerenderBackend {
 public:
  SubprocessBackend(std::string command, Vocabulary vocab = Vocabulary{});

  bool accepts_text_prompt() const override { return true; }
  BackendOutput derender(const RasterImage& image,
                         const std::optional<std::string>& label) const override;

 private:
  std::string command_;
  Vocabulary vocab_;
};

struct FilterDecision {
  bool keep = true;
  std::string reason;  // "", "aspect_ratio", "min_side" or "empty_box"
};

/// Clamps the box to the image, then keeps it iff 0.5 < w/h < 4.0 and
/// both sides are at least 25 px.
FilterDecision filter_box(const WordBox& word, int image_width, int image_height);

/// Maps crop pixel coordinates to page coordinates:
/// page = (a u + b v + tx, c u + d v + ty).
struct Affine {
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  Point apply(const Point& p) const noexcept {
    return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty, p.t};
  }
};

/// Axis-aligned boxes are cut on whole pixels; rotated boxes are resampled
/// bilinearly along the rotated frame.
struct Crop {
  RasterImage image;
  Affine to_page;
};
Crop crop_word(const RasterImage& page, const WordBox& word);

struct WordRecord {
  WordBox word;
  CanvasTransform fit;  // crop pixels -> model canvas
  Affine crop_to_page;
  std::vector<std::string> diagnostics;
  bool skipped = false;
  std::string skip_reason;  // filter reason or "backend_error"
  std::size_t first_stroke = 0;  // range in PageResult::ink
  std::size_t stroke_count = 0;
};

struct PageResult {
  DigitalInk ink;  // page pixel coordinates
  std::vector<WordRecord> words;  // one per input box, same order

  bool any_backend_error() const;
};

/// Throws DataError when m < 8. Per-word failures never escape: the word is
/// marked skipped with reason "backend_error".
PageResult derender_page(const RasterImage& page, const std::vector<WordBox>& boxes,
                         const DerenderBackend& backend, int m = 224, int jobs = 1);

/// JSON array of {box: [x_min, y_min, x_max, y_max], label?, rotation?}.
/// Throws SchemaError with a JSON path such as "$[2].box".
std::vector<WordBox> parse_wordboxes(std::string_view json);
std::vector<WordBox> load_wordboxes(const std::filesystem::path& path);

/// Projection-profile segmentation for clean demo pages: text lines from
/// the row profile, words from column gaps wider than a third of the line
/// height. Boxes are padded by 2 px.
std::vector<WordBox> segment_words(const RasterImage& page);

}  // namespace inkforge::page
