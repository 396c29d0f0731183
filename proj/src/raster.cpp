#include "inkforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/kernels.hpp"
#include "inkforge/normalize.hpp"
#include "random.hpp"

namespace inkforge {

RasterImage::RasterImage(int w, int h, std::array<std::uint8_t, 3> fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw DataError("negative image size");
  rgb.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < rgb.size(); i += 3) {
    rgb[i] = fill[0];
    rgb[i + 1] = fill[1];
    rgb[i + 2] = fill[2];
  }
}

std::array<std::uint8_t, 3> RasterImage::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void RasterImage::set(int x, int y, std::array<std::uint8_t, 3> color) {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[i] = color[0];
  rgb[i + 1] = color[1];
  rgb[i + 2] = color[2];
}

namespace {

constexpr double kMaxRotation = std::numbers::pi / 4.0;

void check_range(const char* field, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi))
    throw DataError(std::string("augmentation field ") + field + " = " + detail::format_shortest(v) +
                    " is outside [" + detail::format_shortest(lo) + ", " + detail::format_shortest(hi) + "]");
}

void check_rgb(const std::string& field, const Rgb& c) {
  for (int i = 0; i < 3; ++i) check_range((field + "[" + std::to_string(i) + "]").c_str(), c[i], 0.0, 1.0);
}

void check_overlay(const std::string& field, const LineOverlay& o) {
  check_range((field + ".line_width_px").c_str(), o.line_width_px, 1.0, 6.0);
  check_range((field + ".spacing_px").c_str(), o.spacing_px, 10.0, 100.0);
  check_rgb(field + ".rgb", o.rgb);
}

void blend(kernels::FloatImage& img, const std::vector<float>& coverage, const Rgb& color) {
  for (std::size_t p = 0; p < coverage.size(); ++p) {
    const float c = coverage[p];
    if (c <= 0.0f) continue;
    for (int ch = 0; ch < 3; ++ch) {
      float& v = img.rgb[p * 3 + static_cast<std::size_t>(ch)];
      v = static_cast<float>(v * (1.0 - c) + color[static_cast<std::size_t>(ch)] * c);
    }
  }
}

void draw_ruling(kernels::FloatImage& img, const LineOverlay& o, bool vertical_too) {
  const int m = img.width;
  std::vector<kernels::Segment> segs;
  for (double pos = 0.5 * o.spacing_px; pos < m; pos += o.spacing_px) {
    segs.push_back({0.0, pos, static_cast<double>(m), pos});
    if (vertical_too) segs.push_back({pos, 0.0, pos, static_cast<double>(m)});
  }
  std::vector<float> cov(static_cast<std::size_t>(m) * m, 0.0f);
  kernels::stroke_coverage(segs, 0.5 * o.line_width_px, m, m, cov);
  blend(img, cov, o.rgb);
}

LineOverlay sample_overlay(detail::Rng& rng) {
  LineOverlay o;
  o.line_width_px = rng.uniform(1.0, 6.0);
  o.spacing_px = rng.uniform(10.0, 100.0);
  for (auto& c : o.rgb) c = rng.uniform();
  return o;
}

}  // namespace

void validate(const AugmentationSpec& spec) {
  check_range("rotation_rad", spec.rotation_rad, -kMaxRotation, kMaxRotation);
  check_rgb("stroke_rgb", spec.stroke_rgb);
  check_rgb("background_rgb", spec.background_rgb);
  check_range("stroke_width_px", spec.stroke_width_px, 1.0, 12.0);
  if (spec.lines) check_overlay("lines", *spec.lines);
  if (spec.grids) check_overlay("grids", *spec.grids);
  if (spec.gaussian_noise_std) check_range("gaussian_noise_std", *spec.gaussian_noise_std, 50.0, 500.0);
  check_range("box_blur_radius_px", spec.box_blur_radius_px, 0.0, 5.0);
}

AugmentationSpec sample_augmentation(std::uint64_t rng_seed, const AugmentationProbabilities& prob) {
  detail::Rng rng(rng_seed);
  AugmentationSpec spec;
  spec.rng_seed = rng_seed;
  spec.rotation_rad = rng.uniform(-kMaxRotation, kMaxRotation);
  for (auto& c : spec.stroke_rgb) c = rng.uniform();
  for (auto& c : spec.background_rgb) c = rng.uniform();
  spec.stroke_width_px = rng.uniform(1.0, 12.0);
  // every field is drawn whether or not its option is enabled
  const bool lines_on = rng.bernoulli(prob.lines);
  const LineOverlay lines = sample_overlay(rng);
  const bool grids_on = rng.bernoulli(prob.grids);
  const LineOverlay grids = sample_overlay(rng);
  const bool noise_on = rng.bernoulli(prob.noise);
  const double noise = rng.uniform(50.0, 500.0);
  const bool blur_on = rng.bernoulli(prob.blur);
  const double blur = rng.uniform(0.0, 5.0);
  if (lines_on) spec.lines = lines;
  if (grids_on) spec.grids = grids;
  if (noise_on) spec.gaussian_noise_std = noise;
  spec.box_blur_radius_px = blur_on ? blur : 0.0;
  return spec;
}

RasterImage render(const DigitalInk& ink, int m, const AugmentationSpec& spec) {
  if (m < 8) throw DataError("image side must be at least 8 pixels");
  validate(spec);

  kernels::FloatImage img(m, m);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3)
    for (int c = 0; c < 3; ++c) img.rgb[i + static_cast<std::size_t>(c)] = static_cast<float>(spec.background_rgb[static_cast<std::size_t>(c)]);

  if (spec.lines) draw_ruling(img, *spec.lines, false);
  if (spec.grids) draw_ruling(img, *spec.grids, true);

  std::vector<kernels::Segment> segs;
  for (const auto& stroke : ink.strokes) {
    const auto& pts = stroke.points;
    if (pts.size() == 1) segs.push_back({pts[0].x, pts[0].y, pts[0].x, pts[0].y});
    for (std::size_t i = 1; i < pts.size(); ++i)
      segs.push_back({pts[i - 1].x, pts[i - 1].y, pts[i].x, pts[i].y});
  }
  if (!segs.empty()) {
    std::vector<float> cov(static_cast<std::size_t>(m) * m, 0.0f);
    kernels::stroke_coverage(segs, 0.5 * spec.stroke_width_px, m, m, cov);
    blend(img, cov, spec.stroke_rgb);
  }

  if (spec.gaussian_noise_std) kernels::add_gaussian_noise(img, *spec.gaussian_noise_std, kernels::mix64(spec.rng_seed));
  if (spec.box_blur_radius_px > 0.0) kernels::box_blur(img, spec.box_blur_radius_px);

  RasterImage out(m, m);
  for (std::size_t i = 0; i < img.rgb.size(); ++i)
    out.rgb[i] = static_cast<std::uint8_t>(std::clamp(std::lround(img.rgb[i] * 255.0), 0l, 255l));
  return out;
}

DigitalInk prepare_for_render(const DigitalInk& ink, int m, const AugmentationSpec& spec) {
  return fit_to_canvas(rotate(ink, spec.rotation_rad), m).ink;
}

FittedImage fit_image(const RasterImage& img, int m) {
  if (img.empty()) throw DataError("cannot fit a zero-size image");
  if (m <= 0) throw DataError("target side must be positive");
  const double side = m;
  const double scale = side / std::max(img.width, img.height);
  CanvasTransform t{scale, 0.5 * (side - img.width * scale), 0.5 * (side - img.height * scale), m};
  FittedImage out{RasterImage(m, m), t};
  kernels::resample_area({img.width, img.height, img.rgb}, t.scale, t.offset_x, t.offset_y, m, m,
                         out.image.rgb);
  return out;
}

RasterImage crop(const RasterImage& img, int x0, int y0, int w, int h) {
  const int xa = std::clamp(x0, 0, img.width), ya = std::clamp(y0, 0, img.height);
  const int xb = std::clamp(x0 + w, 0, img.width), yb = std::clamp(y0 + h, 0, img.height);
  RasterImage out(xb - xa, yb - ya);
  for (int y = ya; y < yb; ++y)
    std::copy_n(&img.rgb[(static_cast<std::size_t>(y) * img.width + xa) * 3],
                static_cast<std::size_t>(xb - xa) * 3,
                &out.rgb[static_cast<std::size_t>(y - ya) * out.width * 3]);
  return out;
}

// ---------------------------------------------------------------------------
// key=value records

namespace {

std::string rgb_text(const Rgb& c) {
  return detail::format_shortest(c[0]) + " " + detail::format_shortest(c[1]) + " " +
         detail::format_shortest(c[2]);
}

std::string overlay_text(const std::optional<LineOverlay>& o) {
  if (!o) return "off";
  return detail::format_shortest(o->line_width_px) + " " + detail::format_shortest(o->spacing_px) + " " +
         rgb_text(o->rgb);
}

std::vector<double> numbers(const std::string& key, std::string_view value, std::size_t count) {
  std::vector<double> out;
  std::istringstream in{std::string(value)};
  std::string word;
  while (in >> word) {
    auto v = detail::parse_double(word);
    if (!v || !std::isfinite(*v)) throw ValueError("field " + key + ": '" + word + "' is not a number");
    out.push_back(*v);
  }
  if (out.size() != count)
    throw ValueError("field " + key + ": expected " + std::to_string(count) + " numbers");
  return out;
}

}  // namespace

std::string format_augmentation(const AugmentationSpec& spec) {
  std::string out;
  out += "rotation_rad=" + detail::format_shortest(spec.rotation_rad) + "\n";
  out += "stroke_rgb=" + rgb_text(spec.stroke_rgb) + "\n";
  out += "background_rgb=" + rgb_text(spec.background_rgb) + "\n";
  out += "stroke_width_px=" + detail::format_shortest(spec.stroke_width_px) + "\n";
  out += "lines=" + overlay_text(spec.lines) + "\n";
  out += "grids=" + overlay_text(spec.grids) + "\n";
  out += "gaussian_noise_std=" +
         (spec.gaussian_noise_std ? detail::format_shortest(*spec.gaussian_noise_std) : std::string("off")) + "\n";
  out += "box_blur_radius_px=" + detail::format_shortest(spec.box_blur_radius_px) + "\n";
  out += "rng_seed=" + std::to_string(spec.rng_seed) + "\n";
  return out;
}

AugmentationSpec parse_augmentation(std::string_view text) {
  AugmentationSpec spec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no, 1);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    auto overlay = [&](std::optional<LineOverlay>& into) {
      if (value == "off") {
        into.reset();
        return;
      }
      auto v = numbers(key, value, 5);
      into = LineOverlay{v[0], v[1], {v[2], v[3], v[4]}};
    };
    if (key == "rotation_rad") spec.rotation_rad = numbers(key, value, 1)[0];
    else if (key == "stroke_rgb") { auto v = numbers(key, value, 3); spec.stroke_rgb = {v[0], v[1], v[2]}; }
    else if (key == "background_rgb") { auto v = numbers(key, value, 3); spec.background_rgb = {v[0], v[1], v[2]}; }
    else if (key == "stroke_width_px") spec.stroke_width_px = numbers(key, value, 1)[0];
    else if (key == "lines") overlay(spec.lines);
    else if (key == "grids") overlay(spec.grids);
    else if (key == "gaussian_noise_std") {
      if (value == "off") spec.gaussian_noise_std.reset();
      else spec.gaussian_noise_std = numbers(key, value, 1)[0];
    } else if (key == "box_blur_radius_px") spec.box_blur_radius_px = numbers(key, value, 1)[0];
    else if (key == "rng_seed") {
      auto v = detail::parse_int<std::uint64_t>(value);
      if (!v) throw ValueError("field rng_seed: not an unsigned 64-bit integer");
      spec.rng_seed = *v;
    } else {
      throw ValueError("unknown augmentation field '" + key + "' on line " + std::to_string(line_no));
    }
    if (nl == text.size()) break;
  }
  return spec;
}

}  // namespace inkforge
