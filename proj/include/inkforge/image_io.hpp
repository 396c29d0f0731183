#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "inkforge/raster.hpp"

namespace inkforge {

/// PNG encoding with fixed settings, so equal images give equal bytes.
std::vector<std::uint8_t> encode_png(const RasterImage& img);
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);

RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

}  // namespace inkforge
