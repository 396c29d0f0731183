#include "inkforge/page.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "inkforge/error.hpp"
#include "inkforge/geo.hpp"
#include "json.hpp"

namespace inkforge::page {
namespace {

constexpr double kMinAspect = 0.5;
constexpr double kMaxAspect = 4.0;
constexpr double kMinSide = 25.0;

BoundingBox clamp_box(const BoundingBox& b, int w, int h) {
  auto cx = [w](double v) { return std::clamp(v, 0.0, static_cast<double>(w)); };
  auto cy = [h](double v) { return std::clamp(v, 0.0, static_cast<double>(h)); };
  return {cx(b.x_min), cy(b.y_min), cx(b.x_max), cy(b.y_max)};
}

bool black(const RasterImage& img, int x, int y) {
  const auto c = img.at(x, y);
  return c[0] == 0 && c[1] == 0 && c[2] == 0;
}

std::array<std::uint8_t, 3> bilinear(const RasterImage& img, double x, double y) {
  // x, y in continuous coordinates; pixel centers at +0.5
  const double fx = std::clamp(x - 0.5, 0.0, img.width - 1.0);
  const double fy = std::clamp(y - 0.5, 0.0, img.height - 1.0);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double ax = fx - x0;
  const double ay = fy - y0;
  const auto p00 = img.at(x0, y0), p10 = img.at(x1, y0), p01 = img.at(x0, y1), p11 = img.at(x1, y1);
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double top = p00[c] * (1 - ax) + p10[c] * ax;
    const double bottom = p01[c] * (1 - ax) + p11[c] * ax;
    out[c] = static_cast<std::uint8_t>(std::lround(top * (1 - ay) + bottom * ay));
  }
  return out;
}

struct WordOutcome {
  WordRecord record;
  std::vector<Stroke> strokes;
};

WordOutcome process_word(const RasterImage& page, const WordBox& word,
                         const DerenderBackend& backend, int m) {
  WordOutcome out;
  out.record.word = word;
  const FilterDecision decision = filter_box(word, page.width, page.height);
  if (!decision.keep) {
    out.record.skipped = true;
    out.record.skip_reason = decision.reason;
    return out;
  }
  try {
    const Crop crop = crop_word(page, word);
    const FittedImage fitted = fit_image(crop.image, m);
    out.record.fit = fitted.transform;
    out.record.crop_to_page = crop.to_page;

    const bool with_label = backend.accepts_text_prompt() && word.label.has_value();
    BackendOutput result = backend.derender(fitted.image, with_label ? word.label : std::nullopt);
    if (total_points(result.ink) == 0 && with_label) {
      result.diagnostics.push_back("empty output; retried without the label");
      BackendOutput retry = backend.derender(fitted.image, std::nullopt);
      result.ink = std::move(retry.ink);
      for (auto& d : retry.diagnostics) result.diagnostics.push_back(std::move(d));
    }
    out.record.diagnostics = std::move(result.diagnostics);

    std::size_t clipped = 0;
    for (auto& stroke : result.ink.strokes)
      for (auto& p : stroke.points) {
        const double x = std::clamp(p.x, 0.0, static_cast<double>(m));
        const double y = std::clamp(p.y, 0.0, static_cast<double>(m));
        if (x != p.x || y != p.y) ++clipped;
        p.x = x;
        p.y = y;
      }
    if (clipped > 0)
      out.record.diagnostics.push_back("clipped " + std::to_string(clipped) +
                                       " points to the canvas");

    const CanvasTransform to_crop = fitted.transform.inverse();
    for (const auto& stroke : result.ink.strokes) {
      if (stroke.points.empty()) continue;
      Stroke mapped;
      mapped.points.reserve(stroke.points.size());
      for (const auto& p : stroke.points) mapped.points.push_back(crop.to_page.apply(to_crop.apply(p)));
      out.strokes.push_back(std::move(mapped));
    }
  } catch (const std::exception& e) {
    out.strokes.clear();
    out.record.skipped = true;
    out.record.skip_reason = "backend_error";
    out.record.diagnostics.push_back(e.what());
  }
  return out;
}

}  // namespace

BackendOutput GeoBackend::derender(const RasterImage& image, const std::optional<std::string>&) const {
  int x0 = 0, y0 = 0, x1 = image.width, y1 = image.height;
  auto row_black = [&](int y) {
    for (int x = x0; x < x1; ++x)
      if (!black(image, x, y)) return false;
    return true;
  };
  auto col_black = [&](int x) {
    for (int y = y0; y < y1; ++y)
      if (!black(image, x, y)) return false;
    return true;
  };
  while (y0 < y1 && row_black(y0)) ++y0;
  while (y1 > y0 && row_black(y1 - 1)) --y1;
  while (x0 < x1 && col_black(x0)) ++x0;
  while (x1 > x0 && col_black(x1 - 1)) --x1;

  BackendOutput out;
  if (x0 >= x1 || y0 >= y1) {
    out.diagnostics.push_back("image is entirely padding");
    return out;
  }
  const RasterImage content = crop(image, x0, y0, x1 - x0, y1 - y0);
  out.ink = transform(geo::derender_word(content), {1.0, static_cast<double>(x0), static_cast<double>(y0), 0});
  return out;
}

FilterDecision filter_box(const WordBox& word, int image_width, int image_height) {
  const BoundingBox b = clamp_box(word.box, image_width, image_height);
  const double w = b.width();
  const double h = b.height();
  if (!(w > 0.0) || !(h > 0.0)) return {false, "empty_box"};
  const double ratio = w / h;
  if (!(ratio > kMinAspect && ratio < kMaxAspect)) return {false, "aspect_ratio"};
  if (std::min(w, h) < kMinSide) return {false, "min_side"};
  return {true, ""};
}

Crop crop_word(const RasterImage& page, const WordBox& word) {
  const BoundingBox b = clamp_box(word.box, page.width, page.height);
  Crop out;
  const double theta = word.rotation.value_or(0.0);
  if (theta == 0.0) {
    const int x0 = static_cast<int>(std::floor(b.x_min));
    const int y0 = static_cast<int>(std::floor(b.y_min));
    const int x1 = static_cast<int>(std::ceil(b.x_max));
    const int y1 = static_cast<int>(std::ceil(b.y_max));
    out.image = crop(page, x0, y0, x1 - x0, y1 - y0);
    out.to_page = {1.0, 0.0, static_cast<double>(x0), 0.0, 1.0, static_cast<double>(y0)};
    return out;
  }
  const int w = std::max(1, static_cast<int>(std::ceil(b.width())));
  const int h = std::max(1, static_cast<int>(std::ceil(b.height())));
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double cx = 0.5 * (b.x_min + b.x_max), cy = 0.5 * (b.y_min + b.y_max);
  // page = center + R(theta) * (u - w/2, v - h/2)
  out.to_page = {cs, -sn, cx - cs * w / 2.0 + sn * h / 2.0,
                 sn, cs, cy - sn * w / 2.0 - cs * h / 2.0};
  out.image = RasterImage(w, h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const Point p = out.to_page.apply({u + 0.5, v + 0.5, 0.0});
      out.image.set(u, v, bilinear(page, p.x, p.y));
    }
  return out;
}

bool PageResult::any_backend_error() const {
  return std::any_of(words.begin(), words.end(),
                     [](const WordRecord& w) { return w.skip_reason == "backend_error"; });
}

PageResult derender_page(const RasterImage& page, const std::vector<WordBox>& boxes,
                         const DerenderBackend& backend, int m, int jobs) {
  if (m < 8) throw DataError("image side m must be at least 8");
  if (page.empty() && !boxes.empty()) throw DataError("page image is empty");

  std::vector<WordOutcome> outcomes(boxes.size());
  const auto n = static_cast<std::ptrdiff_t>(boxes.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i)
    outcomes[static_cast<std::size_t>(i)] = process_word(page, boxes[static_cast<std::size_t>(i)], backend, m);

  PageResult result;
  for (auto& o : outcomes) {
    o.record.first_stroke = result.ink.strokes.size();
    o.record.stroke_count = o.strokes.size();
    for (auto& s : o.strokes) result.ink.strokes.push_back(std::move(s));
    result.words.push_back(std::move(o.record));
  }
  return result;
}

std::vector<WordBox> parse_wordboxes(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("$: expected an array of word boxes");
  std::vector<WordBox> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string at = "$[" + std::to_string(i) + "]";
    const auto& item = doc[i];
    if (!item.is_object()) throw SchemaError(at + ": expected an object");
    if (!item.contains("box") || !item["box"].is_array() || item["box"].size() != 4)
      throw SchemaError(at + ".box: expected [x_min, y_min, x_max, y_max]");
    double v[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& n = item["box"][k];
      if (!n.is_number()) throw SchemaError(at + ".box[" + std::to_string(k) + "]: expected a number");
      v[k] = n.get<double>();
    }
    WordBox wb;
    wb.box = {v[0], v[1], v[2], v[3]};
    if (!wb.box.valid()) throw SchemaError(at + ".box: min exceeds max or value not finite");
    if (item.contains("label")) {
      if (!item["label"].is_string() || item["label"].get<std::string>().empty())
        throw SchemaError(at + ".label: expected a non-empty string");
      wb.label = item["label"].get<std::string>();
    }
    if (item.contains("rotation")) {
      if (!item["rotation"].is_number() || !std::isfinite(item["rotation"].get<double>()))
        throw SchemaError(at + ".rotation: expected a number");
      wb.rotation = item["rotation"].get<double>();
    }
    out.push_back(std::move(wb));
  }
  return out;
}

std::vector<WordBox> load_wordboxes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_wordboxes(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<WordBox> segment_words(const RasterImage& page) {
  std::vector<WordBox> out;
  if (page.empty()) return out;
  const geo::BinaryImage bin = geo::binarize(page);
  const int w = bin.width, h = bin.height;
  constexpr int kPad = 2;

  std::vector<int> rows(h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) rows[y] += bin.at(x, y);

  int y = 0;
  while (y < h) {
    if (rows[y] == 0) {
      ++y;
      continue;
    }
    const int top = y;
    while (y < h && rows[y] > 0) ++y;
    const int bottom = y;  // exclusive
    const int gap_limit = std::max(2, (bottom - top) / 3);

    std::vector<int> cols(w, 0);
    for (int yy = top; yy < bottom; ++yy)
      for (int x = 0; x < w; ++x) cols[x] += bin.at(x, yy);

    int x = 0;
    while (x < w) {
      if (cols[x] == 0) {
        ++x;
        continue;
      }
      const int left = x;
      int right = x;  // exclusive end of the last ink column
      int gap = 0;
      for (; x < w; ++x) {
        if (cols[x] > 0) {
          right = x + 1;
          gap = 0;
        } else if (++gap > gap_limit) {
          break;
        }
      }
      int ymin = bottom, ymax = top;
      for (int yy = top; yy < bottom; ++yy)
        for (int xx = left; xx < right; ++xx)
          if (bin.at(xx, yy)) {
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy + 1);
          }
      WordBox wb;
      wb.box = {static_cast<double>(std::max(0, left - kPad)), static_cast<double>(std::max(0, ymin - kPad)),
                static_cast<double>(std::min(w, right + kPad)), static_cast<double>(std::min(h, ymax + kPad))};
      out.push_back(std::move(wb));
    }
  }
  return out;
}

}  // namespace inkforge::page
