#include <stdexcept>

#include "inkforge/kernels.hpp"
#include "kernel_math.hpp"

namespace inkforge::kernels::serial {

void stroke_coverage(std::span<const Segment> segments, double half_width, int width, int height,
                     std::span<float> out) {
  if (out.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("coverage buffer size mismatch");
  for (const Segment& s : segments) {
    int x0, x1, y0, y1;
    detail::pixel_span(s.x0, s.x1, half_width, width, x0, x1);
    detail::pixel_span(s.y0, s.y1, half_width, height, y0, y1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        float& v = out[static_cast<std::size_t>(y) * width + x];
        v = std::max(v, detail::capsule_coverage(x, y, s, half_width));
      }
  }
}

void box_blur(FloatImage& img, double radius) {
  if (!(radius > 0.0) || img.width == 0 || img.height == 0) return;
  const auto taps = detail::blur_taps(radius);
  const int w = img.width, h = img.height;
  std::vector<float> tmp(img.rgb.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const float* row = &img.rgb[static_cast<std::size_t>(y) * w * 3 + c];
        tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = detail::blur_sample(row, w, 3, x, taps);
      }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const float* col = &tmp[static_cast<std::size_t>(x) * 3 + c];
        img.rgb[(static_cast<std::size_t>(y) * w + x) * 3 + c] =
            detail::blur_sample(col, h, static_cast<std::size_t>(w) * 3, y, taps);
      }
}

void add_gaussian_noise(FloatImage& img, double sigma_255, std::uint64_t seed) {
  const double sigma = sigma_255 / 255.0;
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = detail::noisy(img.rgb[i], i, sigma, seed);
}

std::size_t zhang_suen_pass(Mask& mask, int sub_iteration) {
  const int w = mask.width, h = mask.height;
  std::vector<std::uint8_t> marks(mask.bits.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (mask.at(x, y) && detail::zhang_suen_deletable(mask, x, y, sub_iteration))
        marks[static_cast<std::size_t>(y) * w + x] = 1;
  std::size_t deleted = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (marks[i] && !detail::rescued(marks, w, x, y)) {
        mask.bits[i] = 0;
        ++deleted;
      }
    }
  return deleted;
}

void nearest_distances(std::span<const Vec2> from, std::span<const Vec2> to, std::span<double> out) {
  if (out.size() != from.size()) throw std::invalid_argument("distance buffer size mismatch");
  for (std::size_t i = 0; i < from.size(); ++i) out[i] = detail::nearest(from[i], to.data(), to.size());
}

void resample_area(ByteImageView src, double scale, double offset_x, double offset_y, int dst_w,
                   int dst_h, std::span<std::uint8_t> dst) {
  if (dst.size() != static_cast<std::size_t>(dst_w) * dst_h * 3)
    throw std::invalid_argument("resample buffer size mismatch");
  for (int j = 0; j < dst_h; ++j)
    for (int i = 0; i < dst_w; ++i)
      detail::resample_pixel(src, scale, offset_x, offset_y, i, j,
                             &dst[(static_cast<std::size_t>(j) * dst_w + i) * 3]);
}

}  // namespace inkforge::kernels::serial
