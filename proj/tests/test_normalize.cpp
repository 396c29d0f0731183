#include <numbers>
#include <random>

#include "doctest.h"
#include "inkforge/error.hpp"
#include "inkforge/normalize.hpp"
#include "oracles.hpp"

using namespace inkforge;
using oracle::ink_of;

TEST_SUITE("normalize") {

TEST_CASE("resample linear motion") {
  DigitalInk ink;
  ink.strokes.push_back({{{0, 0, 0.0}, {10, 0, 0.1}}});
  const DigitalInk r = resample_time(ink);
  REQUIRE(r.strokes[0].points.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(r.strokes[0].points[k].x == doctest::Approx(2.0 * k).epsilon(1e-12));
    CHECK(r.strokes[0].points[k].t == doctest::Approx(0.02 * k).epsilon(1e-12));
  }
}

TEST_CASE("resample fixed points") {
  DigitalInk single;
  single.strokes.push_back({{{4, 5, 0.3}}});
  CHECK(resample_time(single) == single);

  DigitalInk sampled;
  Stroke s;
  for (int k = 0; k < 8; ++k) s.points.push_back({k * 1.5, k * k * 0.5, 0.02 * k});
  sampled.strokes.push_back(s);
  const DigitalInk r = resample_time(sampled);
  REQUIRE(r.strokes[0].points.size() == s.points.size());
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    CHECK(std::abs(r.strokes[0].points[k].x - s.points[k].x) <= 1e-9);
    CHECK(std::abs(r.strokes[0].points[k].y - s.points[k].y) <= 1e-9);
  }
}

TEST_CASE("resample skips synthetic time and rejects decreasing time") {
  DigitalInk synthetic = hallucinate_time(ink_of({{{0, 0}, {5, 5}}}));
  const DigitalInk r = resample_time(synthetic);
  CHECK(r.strokes == synthetic.strokes);
  CHECK(r.metadata.at(kResampleSkippedKey) == kSyntheticTimeKey);

  DigitalInk bad;
  bad.strokes.push_back({{{0, 0, 0.0}}});
  bad.strokes.push_back({{{0, 0, 0.5}, {1, 1, 0.2}}});
  CHECK_THROWS_WITH_AS(resample_time(bad), "stroke 1 has decreasing timestamps", DataError);
}

TEST_CASE("simplify fixtures") {
  const DigitalInk collinear = ink_of({{{0, 0}, {5, 0}, {10, 0}}});
  const DigitalInk s = simplify(collinear, {0.5});
  REQUIRE(s.strokes[0].points.size() == 2);
  CHECK(s.strokes[0].points[1].x == 10.0);

  CHECK(simplify(collinear, {0.0}) == collinear);

  const DigitalInk corner = ink_of({{{0, 0}, {10, 0}, {10, 10}}});
  CHECK(simplify(corner, {0.5}).strokes[0].points.size() == 3);
  CHECK(oracle::rdp(corner.strokes[0].points, 0.5).size() == 3);
}

TEST_CASE("simplify matches the recursive oracle on random strokes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const DigitalInk ink = oracle::random_ink(rng, 3, 12, 20.0);
    const double eps = std::uniform_real_distribution<double>(0.0, 8.0)(rng);
    const DigitalInk s = simplify(ink, {eps});
    for (std::size_t i = 0; i < ink.strokes.size(); ++i)
      CHECK(s.strokes[i].points == oracle::rdp(ink.strokes[i].points, eps));
  }
}

TEST_CASE("fit to canvas") {
  const FittedInk f = fit_to_canvas(ink_of({{{0, 0}, {10, 5}}}), 224);
  CHECK(f.transform.scale == doctest::Approx(22.4));
  const BoundingBox b = bounds(f.ink);
  CHECK(b.x_min == doctest::Approx(0.0));
  CHECK(b.y_min == doctest::Approx(56.0));
  CHECK(b.x_max == doctest::Approx(224.0));
  CHECK(b.y_max == doctest::Approx(168.0));

  const FittedInk dot = fit_to_canvas(ink_of({{{7, -3}}}), 224);
  CHECK(dot.ink.strokes[0].points[0].x == doctest::Approx(112.0));
  CHECK(dot.ink.strokes[0].points[0].y == doctest::Approx(112.0));

  const FittedInk same = fit_to_canvas(ink_of({{{0, 0}, {224, 224}}}), 224);
  CHECK(std::abs(same.transform.scale - 1.0) <= 1e-9);
  CHECK(std::abs(same.transform.offset_x) <= 1e-9);
  CHECK(std::abs(same.transform.offset_y) <= 1e-9);

  CHECK_THROWS_AS(fit_to_canvas(DigitalInk{}, 224), DataError);
}

TEST_CASE("fit inverse round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const DigitalInk ink = oracle::random_ink(rng, 5, 20);
    const FittedInk f = fit_to_canvas(ink, 224);
    const DigitalInk back = transform(f.ink, f.transform.inverse());
    for (std::size_t s = 0; s < ink.strokes.size(); ++s)
      for (std::size_t i = 0; i < ink.strokes[s].points.size(); ++i) {
        CHECK(std::abs(back.strokes[s].points[i].x - ink.strokes[s].points[i].x) <= 1e-6);
        CHECK(std::abs(back.strokes[s].points[i].y - ink.strokes[s].points[i].y) <= 1e-6);
      }
  }
}

TEST_CASE("hallucinated time") {
  const DigitalInk one = hallucinate_time(ink_of({{{0, 0}, {1, 1}, {2, 2}}}));
  CHECK(one.strokes[0].points[2].t == doctest::Approx(0.04));
  CHECK(one.has_synthetic_time());

  const DigitalInk two = hallucinate_time(ink_of({{{0, 0}, {1, 1}}, {{2, 2}, {3, 3}}}));
  CHECK(two.strokes[0].points[0].t == doctest::Approx(0.0));
  CHECK(two.strokes[0].points[1].t == doctest::Approx(0.02));
  CHECK(two.strokes[1].points[0].t == doctest::Approx(0.06));
  CHECK(two.strokes[1].points[1].t == doctest::Approx(0.08));

  CHECK(hallucinate_time(DigitalInk{}).strokes.empty());
}

TEST_CASE("rotate about the center") {
  const DigitalInk r = rotate(ink_of({{{0, 0}, {10, 0}}}), std::numbers::pi / 2);
  CHECK(r.strokes[0].points[0].x == doctest::Approx(5.0));
  CHECK(r.strokes[0].points[0].y == doctest::Approx(-5.0));
  CHECK(r.strokes[0].points[1].y == doctest::Approx(5.0));
}

TEST_CASE("normalize lands on the canvas") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const DigitalInk ink = oracle::random_ink(rng, 6, 30);
    if (total_points(ink) < 2) continue;
    const FittedInk f = normalize(ink);
    const BoundingBox b = bounds(f.ink);
    CHECK(b.x_min >= -1e-9);
    CHECK(b.y_min >= -1e-9);
    CHECK(b.x_max <= 224 + 1e-9);
    CHECK(b.y_max <= 224 + 1e-9);
    CHECK(std::max(b.width(), b.height()) == doctest::Approx(224.0));
    CHECK(check_invariants(f.ink).empty());
  }
}

}
