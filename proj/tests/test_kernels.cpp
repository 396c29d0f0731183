#include <omp.h>

#include <random>

#include "doctest.h"
#include "inkforge/kernels.hpp"
#include "oracles.hpp"

using namespace inkforge::kernels;

namespace {

std::vector<Segment> random_segments(std::mt19937_64& rng, int count, double extent) {
  std::uniform_real_distribution<double> c(-5.0, extent + 5.0);
  std::vector<Segment> out;
  for (int i = 0; i < count; ++i) out.push_back({c(rng), c(rng), c(rng), c(rng)});
  return out;
}

FloatImage random_image(std::mt19937_64& rng, int w, int h) {
  FloatImage img(w, h);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (auto& v : img.rgb) v = u(rng);
  return img;
}

Mask random_blobs(std::mt19937_64& rng, int w, int h) {
  Mask m(w, h);
  std::uniform_int_distribution<int> x(0, w - 1), y(0, h - 1), r(1, 5);
  for (int k = 0; k < 12; ++k) {
    const int cx = x(rng), cy = y(rng), rad = r(rng);
    for (int j = std::max(0, cy - rad); j < std::min(h, cy + rad); ++j)
      for (int i = std::max(0, cx - 3 * rad); i < std::min(w, cx + 3 * rad); ++i)
        m.bits[static_cast<std::size_t>(j) * w + i] = 1;
  }
  return m;
}

oracle::Grid to_grid(const Mask& m) {
  oracle::Grid g(m.height, std::vector<int>(m.width));
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) g[y][x] = m.at(x, y);
  return g;
}

struct ThreadCount {
  int saved = omp_get_max_threads();
  explicit ThreadCount(int n) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("coverage matches a per-pixel oracle") {
  std::mt19937_64 rng(1);
  const int w = 40, h = 30;
  const auto segs = random_segments(rng, 6, 40);
  std::vector<float> out(w * h, 0.0f);
  serial::stroke_coverage(segs, 1.5, w, h, out);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double best = 0.0;
      for (const auto& s : segs) {
        const double d = oracle::distance_to_segment({x + 0.5, y + 0.5, 0}, {s.x0, s.y0, 0}, {s.x1, s.y1, 0});
        best = std::max(best, std::clamp(2.0 - d, 0.0, 1.0));
      }
      CHECK(out[y * w + x] == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  ThreadCount threads(4);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const int w = 37 + trial * 13, h = 29 + trial * 7;

    const auto segs = random_segments(rng, 20, std::max(w, h));
    std::vector<float> a(w * h, 0.0f), b(w * h, 0.0f);
    serial::stroke_coverage(segs, 0.5 + trial, w, h, a);
    parallel::stroke_coverage(segs, 0.5 + trial, w, h, b);
    CHECK(a == b);

    FloatImage img = random_image(rng, w, h);
    FloatImage img2 = img;
    serial::box_blur(img, 0.7 * trial + 0.3);
    parallel::box_blur(img2, 0.7 * trial + 0.3);
    CHECK(img.rgb == img2.rgb);

    serial::add_gaussian_noise(img, 120.0, 99 + trial);
    parallel::add_gaussian_noise(img2, 120.0, 99 + trial);
    CHECK(img.rgb == img2.rgb);

    Mask m1 = random_blobs(rng, w, h), m2 = m1;
    for (int pass = 0; pass < 6; ++pass)
      CHECK(serial::zhang_suen_pass(m1, pass % 2) == parallel::zhang_suen_pass(m2, pass % 2));
    CHECK(m1 == m2);

    std::vector<Vec2> from, to;
    std::uniform_real_distribution<double> c(0, 100);
    for (int i = 0; i < 200; ++i) from.push_back({c(rng), c(rng)});
    for (int i = 0; i < 150; ++i) to.push_back({c(rng), c(rng)});
    std::vector<double> d1(from.size()), d2(from.size());
    serial::nearest_distances(from, to, d1);
    parallel::nearest_distances(from, to, d2);
    CHECK(d1 == d2);

    std::vector<std::uint8_t> src(static_cast<std::size_t>(w) * h * 3);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& v : src) v = static_cast<std::uint8_t>(byte(rng));
    const ByteImageView view{w, h, src};
    std::vector<std::uint8_t> r1(64 * 64 * 3), r2(64 * 64 * 3);
    serial::resample_area(view, 64.0 / std::max(w, h), 1.5, 2.0, 64, 64, r1);
    parallel::resample_area(view, 64.0 / std::max(w, h), 1.5, 2.0, 64, 64, r2);
    CHECK(r1 == r2);
  }
}

TEST_CASE("zhang-suen pass matches the grid oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    Mask m = random_blobs(rng, 50, 40);
    oracle::Grid g = to_grid(m);
    for (int pass = 0; pass < 8; ++pass) {
      const std::size_t got = serial::zhang_suen_pass(m, pass % 2);
      const int want = oracle::zs_pass(g, pass % 2);
      CHECK(got == static_cast<std::size_t>(want));
    }
    CHECK(to_grid(m) == g);
  }
}

TEST_CASE("box blur with integer radius is a clamped window mean") {
  std::mt19937_64 rng(6);
  FloatImage img = random_image(rng, 9, 7);
  const FloatImage src = img;
  serial::box_blur(img, 1.0);
  auto at = [&](int x, int y, int c) {
    x = std::clamp(x, 0, 8);
    y = std::clamp(y, 0, 6);
    return static_cast<double>(src.rgb[(y * 9 + x) * 3 + c]);
  };
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) acc += at(x + dx, y + dy, c);
        CHECK(img.rgb[(y * 9 + x) * 3 + c] == doctest::Approx(acc / 9.0).epsilon(1e-5));
      }
}

TEST_CASE("noise statistics") {
  FloatImage img(200, 200);
  for (auto& v : img.rgb) v = 0.5f;
  serial::add_gaussian_noise(img, 25.5, 7);
  double sum = 0.0, sq = 0.0;
  for (float v : img.rgb) {
    sum += v;
    sq += (v - 0.5) * (v - 0.5);
  }
  const double n = static_cast<double>(img.rgb.size());
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::sqrt(sq / n) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("nearest distances and identity resample") {
  const std::vector<Vec2> from{{0, 0}, {3, 4}}, to{{0, 1}, {6, 8}};
  std::vector<double> out(2);
  nearest_distances(from, to, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == doctest::Approx(std::sqrt(9.0 + 9.0)));

  std::vector<std::uint8_t> src{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
  std::vector<std::uint8_t> dst(12);
  resample_area({2, 2, src}, 1.0, 0.0, 0.0, 2, 2, dst);
  CHECK(dst == src);
  std::vector<std::uint8_t> small(3);
  resample_area({2, 2, src}, 0.5, 0.0, 0.0, 1, 1, small);
  CHECK(small == std::vector<std::uint8_t>{55, 65, 75});
}

}
