#include <benchmark/benchmark.h>

#include <random>

#include "inkforge/kernels.hpp"

using namespace inkforge::kernels;

namespace {

std::vector<Segment> segments(int count, int side) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(0, side);
  std::vector<Segment> out;
  for (int i = 0; i < count; ++i) out.push_back({c(rng), c(rng), c(rng), c(rng)});
  return out;
}

FloatImage image(int side) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(0, 1);
  FloatImage img(side, side);
  for (auto& v : img.rgb) v = u(rng);
  return img;
}

Mask thick_mask(int side) {
  Mask m(side, side);
  for (int y = side / 4; y < 3 * side / 4; ++y)
    for (int x = 4; x < side - 4; ++x)
      if ((x / 16 + y / 16) % 2 == 0) m.bits[static_cast<std::size_t>(y) * side + x] = 1;
  return m;
}

template <void (*Fn)(std::span<const Segment>, double, int, int, std::span<float>)>
void BM_coverage(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto segs = segments(200, side);
  std::vector<float> out(static_cast<std::size_t>(side) * side);
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0f);
    Fn(segs, 2.0, side, side, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <void (*Fn)(FloatImage&, double)>
void BM_blur(benchmark::State& state) {
  const FloatImage src = image(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    FloatImage img = src;
    Fn(img, 2.5);
    benchmark::DoNotOptimize(img.rgb.data());
  }
}

template <void (*Fn)(FloatImage&, double, std::uint64_t)>
void BM_noise(benchmark::State& state) {
  const FloatImage src = image(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    FloatImage img = src;
    Fn(img, 100.0, 7);
    benchmark::DoNotOptimize(img.rgb.data());
  }
}

template <std::size_t (*Fn)(Mask&, int)>
void BM_thinning(benchmark::State& state) {
  const Mask src = thick_mask(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Mask m = src;
    while (Fn(m, 0) + Fn(m, 1) > 0) {
    }
    benchmark::DoNotOptimize(m.bits.data());
  }
}

template <void (*Fn)(std::span<const Vec2>, std::span<const Vec2>, std::span<double>)>
void BM_nearest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(0, 224);
  std::vector<Vec2> a(n), b(n);
  for (auto& p : a) p = {c(rng), c(rng)};
  for (auto& p : b) p = {c(rng), c(rng)};
  std::vector<double> out(n);
  for (auto _ : state) {
    Fn(a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_coverage<serial::stroke_coverage>)->Name("coverage/serial")->Arg(224)->Arg(512);
BENCHMARK(BM_coverage<parallel::stroke_coverage>)->Name("coverage/parallel")->Arg(224)->Arg(512);
BENCHMARK(BM_blur<serial::box_blur>)->Name("blur/serial")->Arg(224)->Arg(512);
BENCHMARK(BM_blur<parallel::box_blur>)->Name("blur/parallel")->Arg(224)->Arg(512);
BENCHMARK(BM_noise<serial::add_gaussian_noise>)->Name("noise/serial")->Arg(224)->Arg(512);
BENCHMARK(BM_noise<parallel::add_gaussian_noise>)->Name("noise/parallel")->Arg(224)->Arg(512);
BENCHMARK(BM_thinning<serial::zhang_suen_pass>)->Name("thinning/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_thinning<parallel::zhang_suen_pass>)->Name("thinning/parallel")->Arg(128)->Arg(256);
BENCHMARK(BM_nearest<serial::nearest_distances>)->Name("nearest/serial")->Arg(1000)->Arg(4000);
BENCHMARK(BM_nearest<parallel::nearest_distances>)->Name("nearest/parallel")->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
