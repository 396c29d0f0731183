#include <filesystem>

#include "doctest.h"
#include "inkforge/error.hpp"
#include "inkforge/image_io.hpp"
#include "inkforge/raster.hpp"
#include "oracles.hpp"

using namespace inkforge;
using oracle::ink_of;

TEST_SUITE("raster") {

TEST_CASE("background only") {
  const RasterImage img = render(DigitalInk{}, 32, AugmentationSpec{});
  CHECK(img.width == 32);
  for (std::uint8_t v : img.rgb) CHECK(v == 255);
}

TEST_CASE("stroke geometry") {
  const RasterImage img = render(ink_of({{{10, 112}, {214, 112}}}), 224, AugmentationSpec{});
  CHECK(img.at(112, 112) == std::array<std::uint8_t, 3>{0, 0, 0});
  CHECK(img.at(10, 10) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(img.at(112, 116) == std::array<std::uint8_t, 3>{255, 255, 255});
}

TEST_CASE("render determinism including noise and blur") {
  AugmentationSpec spec = sample_augmentation(42, {1.0, 1.0, 1.0, 1.0});
  spec.rotation_rad = 0.0;
  const DigitalInk ink = oracle::geometric_fixtures()[12];
  const RasterImage a = render(ink, 96, spec);
  const RasterImage b = render(ink, 96, spec);
  CHECK(a == b);
  CHECK(encode_png(a) == encode_png(b));
  spec.rng_seed += 1;
  CHECK_FALSE(render(ink, 96, spec) == a);
}

TEST_CASE("render argument checks") {
  CHECK_THROWS_AS(render(DigitalInk{}, 7, AugmentationSpec{}), DataError);
  AugmentationSpec bad;
  bad.stroke_width_px = 13.0;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("stroke_width_px"), DataError);
  bad = {};
  bad.gaussian_noise_std = 10.0;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("gaussian_noise_std"), DataError);
}

TEST_CASE("augmentation sampling") {
  CHECK(sample_augmentation(5) == sample_augmentation(5));
  CHECK_FALSE(sample_augmentation(5) == sample_augmentation(6));
  double wmin = 100, wmax = -100;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const AugmentationSpec s = sample_augmentation(seed);
    validate(s);
    wmin = std::min(wmin, s.stroke_width_px);
    wmax = std::max(wmax, s.stroke_width_px);
    if (s.gaussian_noise_std) {
      CHECK(*s.gaussian_noise_std >= 50.0);
      CHECK(*s.gaussian_noise_std <= 500.0);
    }
  }
  CHECK(wmin < 2.0);
  CHECK(wmax > 11.0);
  const AugmentationSpec none = sample_augmentation(3, {0.0, 0.0, 0.0, 0.0});
  CHECK_FALSE(none.lines.has_value());
  CHECK_FALSE(none.gaussian_noise_std.has_value());
  CHECK(none.box_blur_radius_px == 0.0);
  CHECK(none.stroke_width_px == sample_augmentation(3).stroke_width_px);
}

TEST_CASE("spec text round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AugmentationSpec s = sample_augmentation(seed, {0.5, 0.5, 0.5, 0.5});
    CHECK(parse_augmentation(format_augmentation(s)) == s);
  }
  CHECK(parse_augmentation("# only defaults\n") == AugmentationSpec{});
  CHECK_THROWS_AS(parse_augmentation("colour=1\n"), ValueError);
}

TEST_CASE("fit image arithmetic") {
  const FittedImage wide = fit_image(RasterImage(448, 224, {255, 255, 255}), 224);
  CHECK(wide.image.width == 224);
  CHECK(wide.transform.scale == 0.5);
  CHECK(wide.transform.offset_y == 56.0);
  CHECK(wide.image.at(100, 55) == std::array<std::uint8_t, 3>{0, 0, 0});
  CHECK(wide.image.at(100, 56) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(wide.image.at(100, 167) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(wide.image.at(100, 168) == std::array<std::uint8_t, 3>{0, 0, 0});

  RasterImage square(224, 224);
  for (std::size_t i = 0; i < square.rgb.size(); ++i) square.rgb[i] = static_cast<std::uint8_t>(i * 7);
  const FittedImage same = fit_image(square, 224);
  CHECK(same.image == square);
  CHECK(same.transform.scale == 1.0);
  CHECK(same.transform.offset_x == 0.0);

  const FittedImage tall = fit_image(RasterImage(10, 40, {9, 9, 9}), 224);
  CHECK(tall.transform.scale == doctest::Approx(5.6));
  CHECK(tall.transform.offset_x == doctest::Approx(84.0));
  const Point corner = tall.transform.apply({10, 40, 0});
  CHECK(corner.x == doctest::Approx(140.0));
  CHECK(corner.y == doctest::Approx(224.0));
  const Point back = tall.transform.inverse().apply(corner);
  CHECK(back.x == doctest::Approx(10.0));
  CHECK(back.y == doctest::Approx(40.0));

  CHECK_THROWS_AS(fit_image(RasterImage{}, 224), DataError);
}

TEST_CASE("crop clamps") {
  RasterImage img(10, 10);
  img.set(9, 9, {1, 2, 3});
  const RasterImage c = crop(img, 8, 8, 5, 5);
  CHECK(c.width == 2);
  CHECK(c.at(1, 1) == std::array<std::uint8_t, 3>{1, 2, 3});
}

TEST_CASE("png round trip") {
  RasterImage img(13, 7);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = static_cast<std::uint8_t>(i * 31);
  CHECK(decode_png(encode_png(img)) == img);
  const auto path = std::filesystem::temp_directory_path() / "inkforge_test.png";
  write_png(path, img);
  CHECK(read_png(path) == img);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(decode_png({1, 2, 3}), DataError);
}

}
