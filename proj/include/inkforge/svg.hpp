#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "inkforge/ink.hpp"
#include "inkforge/page.hpp"

namespace inkforge {

/// Contiguous run of strokes colored as one word.
struct StrokeGroup {
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Strokes within a group go from red (first) to purple (last); each stroke
/// runs from dark to light along its points.
std::string overlay_svg(const DigitalInk& ink, const std::vector<StrokeGroup>& groups, int width,
                        int height);

/// The whole ink as a single group.
std::string overlay_svg(const DigitalInk& ink, int width, int height);

/// One group per derendered word.
std::string overlay_svg(const page::PageResult& result, int width, int height);

}  // namespace inkforge
