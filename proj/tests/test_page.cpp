#include <atomic>
#include <numbers>

#include "doctest.h"
#include "inkforge/error.hpp"
#include "inkforge/page.hpp"
#include "inkforge/svg.hpp"
#include "oracles.hpp"

using namespace inkforge;
using namespace inkforge::page;

namespace {

class EchoBackend final : public DerenderBackend {
 public:
  explicit EchoBackend(DigitalInk ink, bool text = false) : ink_(std::move(ink)), text_(text) {}
  bool accepts_text_prompt() const override { return text_; }
  BackendOutput derender(const RasterImage&, const std::optional<std::string>& label) const override {
    if (label) ++labelled;
    else ++plain;
    return {label && empty_with_label ? DigitalInk{} : ink_, {}};
  }
  mutable std::atomic<int> labelled{0}, plain{0};
  bool empty_with_label = false;

 private:
  DigitalInk ink_;
  bool text_;
};

class ThrowingBackend final : public DerenderBackend {
 public:
  bool accepts_text_prompt() const override { return false; }
  BackendOutput derender(const RasterImage&, const std::optional<std::string>&) const override {
    throw BackendError("model crashed");
  }
};

WordBox box(double x0, double y0, double x1, double y1) { return {{x0, y0, x1, y1}, {}, {}}; }

}  // namespace

TEST_SUITE("page") {

TEST_CASE("crop filter rules") {
  CHECK(filter_box(box(0, 0, 100, 50), 500, 500).keep);
  const FilterDecision wide = filter_box(box(0, 0, 100, 20), 500, 500);
  CHECK_FALSE(wide.keep);
  CHECK(wide.reason == "aspect_ratio");
  const FilterDecision small = filter_box(box(0, 0, 24, 24), 500, 500);
  CHECK_FALSE(small.keep);
  CHECK(small.reason == "min_side");
  CHECK(filter_box(box(0, 0, 25, 25), 500, 500).keep);
  CHECK_FALSE(filter_box(box(0, 0, 100, 25), 500, 500).keep);
  CHECK(filter_box(box(0, 0, 99.99, 25), 500, 500).keep);
  CHECK_FALSE(filter_box(box(0, 0, 25, 50), 500, 500).keep);
  CHECK(filter_box(box(0, 0, 25.01, 50), 500, 500).keep);
  CHECK(filter_box(box(480, 0, 600, 30), 500, 500).reason == "min_side");
  CHECK(filter_box(box(600, 0, 700, 50), 500, 500).reason == "empty_box");
}

TEST_CASE("zero boxes") {
  const PageResult r = derender_page(RasterImage(50, 50), {}, GeoBackend{});
  CHECK(r.ink.strokes.empty());
  CHECK(r.words.empty());
  CHECK_THROWS_AS(derender_page(RasterImage(50, 50), {}, GeoBackend{}, 7), DataError);
}

TEST_CASE("echo backend maps through the inverse fit") {
  const DigitalInk fixed = oracle::ink_of({{{10, 20}, {200, 150}}});
  const EchoBackend echo(fixed);
  const RasterImage page(300, 150, {255, 255, 255});
  const PageResult r = derender_page(page, {box(0, 0, 300, 150)}, echo, 224);
  REQUIRE(r.words.size() == 1);
  CHECK_FALSE(r.words[0].skipped);
  const DigitalInk expect = transform(fixed, r.words[0].fit.inverse());
  REQUIRE(r.ink.strokes.size() == 1);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.ink.strokes[0].points[i].x == doctest::Approx(expect.strokes[0].points[i].x));
    CHECK(r.ink.strokes[0].points[i].y == doctest::Approx(expect.strokes[0].points[i].y));
  }
}

TEST_CASE("paste-back exactness with an offset box") {
  const DigitalInk page_ink = oracle::ink_of({{{130, 80}, {170, 95}, {210, 82}}});
  const WordBox word = box(120.4, 70.2, 220.7, 110.9);
  const RasterImage page = oracle::render_plain(page_ink, 300, 2.0);
  const Crop c = crop_word(page, word);
  const FittedImage fitted = fit_image(c.image, 224);
  const DigitalInk canvas = transform(transform(page_ink, {1.0, -c.to_page.tx, -c.to_page.ty, 0}), fitted.transform);
  const PageResult r = derender_page(page, {word}, EchoBackend(canvas), 224);
  REQUIRE(r.ink.strokes.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(r.ink.strokes[0].points[i].x - page_ink.strokes[0].points[i].x) <= 1.0);
    CHECK(std::abs(r.ink.strokes[0].points[i].y - page_ink.strokes[0].points[i].y) <= 1.0);
  }
}

TEST_CASE("geo backend keeps words inside their boxes") {
  const std::vector<WordBox> boxes{box(20, 20, 140, 80), box(170, 30, 290, 90), box(40, 150, 200, 210)};
  DigitalInk page_ink;
  page_ink.strokes.push_back(oracle::ink_of({{{30, 70}, {50, 30}, {70, 70}, {90, 30}, {130, 60}}}).strokes[0]);
  page_ink.strokes.push_back(oracle::ink_of({{{180, 40}, {180, 80}, {280, 80}}}).strokes[0]);
  page_ink.strokes.push_back(oracle::ink_of({{{50, 180}, {190, 180}}}).strokes[0]);
  page_ink.strokes.push_back(oracle::ink_of({{{120, 160}, {120, 200}}}).strokes[0]);
  const RasterImage page = oracle::render_plain(page_ink, 300, 2.0);
  const PageResult r = derender_page(page, boxes, GeoBackend{}, 224, 2);
  REQUIRE(r.words.size() == 3);
  for (const WordRecord& w : r.words) {
    CHECK_FALSE(w.skipped);
    REQUIRE(w.stroke_count > 0);
    DigitalInk word_ink;
    for (std::size_t s = w.first_stroke; s < w.first_stroke + w.stroke_count; ++s)
      word_ink.strokes.push_back(r.ink.strokes[s]);
    CHECK(w.word.box.scaled_about_center(1.1).contains(bounds(word_ink)));
  }
  const std::string svg = overlay_svg(r, 300, 300);
  CHECK(svg.find("hsl(0,100%,30%)") != std::string::npos);
  CHECK(svg == overlay_svg(r, 300, 300));
}

TEST_CASE("backend failures are isolated") {
  const RasterImage page(200, 100, {255, 255, 255});
  const PageResult r = derender_page(page, {box(0, 0, 100, 50), box(100, 50, 200, 100), box(0, 0, 10, 10)},
                                     ThrowingBackend{}, 64, 2);
  REQUIRE(r.words.size() == 3);
  CHECK(r.words[0].skip_reason == "backend_error");
  CHECK(r.words[1].skip_reason == "backend_error");
  CHECK(r.words[2].skip_reason == "min_side");
  CHECK(r.words[0].diagnostics.at(0) == "model crashed");
  CHECK(r.ink.strokes.empty());
  CHECK(r.any_backend_error());
}

TEST_CASE("empty output retries without the label") {
  EchoBackend echo(oracle::ink_of({{{5, 5}, {300, 10}}}), true);
  echo.empty_with_label = true;
  WordBox labelled = box(0, 0, 100, 50);
  labelled.label = "hi";
  const PageResult r = derender_page(RasterImage(100, 50), {labelled}, echo, 64);
  CHECK(echo.labelled == 1);
  CHECK(echo.plain == 1);
  REQUIRE(r.ink.strokes.size() == 1);
  const auto& d = r.words[0].diagnostics;
  CHECK(d.size() == 2);
  CHECK(d[1].find("clipped 1 points") != std::string::npos);
  for (const auto& p : r.ink.strokes[0].points) CHECK(p.x <= 100.0 + 1e-9);
}

TEST_CASE("rotated crop maps back onto the page") {
  RasterImage page(100, 100, {255, 255, 255});
  page.set(60, 50, {0, 0, 0});
  WordBox w = box(30, 30, 70, 70);
  w.rotation = std::numbers::pi / 2;
  const Crop c = crop_word(page, w);
  CHECK(c.image.width == 40);
  const Point center = c.to_page.apply({20, 20, 0});
  CHECK(center.x == doctest::Approx(50.0));
  CHECK(center.y == doctest::Approx(50.0));
  const Point mapped = c.to_page.apply({20.5, 9.5, 0});
  CHECK(mapped.x == doctest::Approx(60.5));
  CHECK(mapped.y == doctest::Approx(50.5));
  CHECK(c.image.at(20, 9)[0] < 128);
}

TEST_CASE("word box json") {
  const auto one = parse_wordboxes(R"([{"box":[0,0,100,50],"label":"hi"}])");
  REQUIRE(one.size() == 1);
  CHECK(one[0].label == std::optional<std::string>("hi"));
  CHECK(one[0].box.x_max == 100);
  CHECK(parse_wordboxes("[]").empty());
  CHECK_THROWS_WITH_AS(parse_wordboxes(R"([{"box":[0,0,1,1]},{"box":[5,0,1,1]}])"),
                       doctest::Contains("$[1].box"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_wordboxes(R"([{"box":[0,0,1,1],"label":""}])"), doctest::Contains("$[0].label"),
                       SchemaError);
  CHECK_THROWS_AS(parse_wordboxes("{"), SchemaError);
  CHECK(load_wordboxes(std::string(INKFORGE_TEST_DATA) + "/page_boxes.json").size() == 3);
}

TEST_CASE("projection segmentation") {
  DigitalInk ink = oracle::ink_of({{{20, 30}, {60, 30}}, {{90, 30}, {150, 40}}, {{20, 100}, {80, 110}}});
  const RasterImage page = oracle::render_plain(ink, 200, 3.0);
  const auto words = segment_words(page);
  REQUIRE(words.size() == 3);
  CHECK(words[0].box.x_max < words[1].box.x_min);
  CHECK(words[2].box.y_min > 90);
  for (std::size_t i = 0; i < 3; ++i) {
    DigitalInk one;
    one.strokes.push_back(ink.strokes[i]);
    CHECK(words[i].box.contains(bounds(one)));
  }
}

TEST_CASE("subprocess backend protocol") {
  const SubprocessBackend backend(std::string(INKFORGE_TEST_DATA) + "/fake_backend.sh");
  const BackendOutput out = backend.derender(RasterImage(112, 112), std::string("hi"));
  REQUIRE(out.ink.strokes.size() == 1);
  CHECK(out.ink.strokes[0].points[1].x == doctest::Approx(50.0));
  CHECK(out.diagnostics.empty());
  CHECK_THROWS_AS(SubprocessBackend("false").derender(RasterImage(16, 16), std::nullopt), BackendError);
  CHECK_THROWS_AS(SubprocessBackend("true").derender(RasterImage(16, 16), std::nullopt), BackendError);
}

}
