#pragma once

#include <string>

#include "inkforge/ink.hpp"

namespace inkforge {

inline constexpr double kDefaultSamplePeriod = 0.020;  // seconds
inline constexpr double kDefaultSimplifyEpsilon = 1.0;  // canvas units
inline constexpr int kDefaultCanvasSize = 224;

/// Metadata key set by resample_time when it passes an ink through untouched.
inline constexpr const char* kResampleSkippedKey = "resample_skipped";

struct ResampleSpec {
  double period = kDefaultSamplePeriod;
};

struct SimplifySpec {
  double epsilon = kDefaultSimplifyEpsilon;
};

/// Resamples every stroke at t0 + k * period with linear interpolation of x
/// and y. First and last samples of each stroke are kept verbatim. Inks with
/// synthetic timestamps are returned unchanged with `resample_skipped` set.
/// Throws DataError naming the stroke when timestamps decrease.
DigitalInk resample_time(const DigitalInk& ink, const ResampleSpec& spec = {});

/// Per-stroke Ramer-Douglas-Peucker. A point survives when its distance to
/// the current chord segment exceeds epsilon; epsilon 0 returns the input.
DigitalInk simplify(const DigitalInk& ink, const SimplifySpec& spec = {});

struct FittedInk {
  DigitalInk ink;
  CanvasTransform transform;  // source -> canvas
};

/// Uniform scale so the larger side of the bounds spans exactly n, centered
/// on the n x n canvas. Zero-extent inks keep scale 1 and land on the center.
/// Throws DataError on an empty ink.
FittedInk fit_to_canvas(const DigitalInk& ink, int n);

/// Assigns t = k * period, k counting across strokes with one idle tick
/// between consecutive strokes, and marks the ink as having synthetic time.
DigitalInk hallucinate_time(const DigitalInk& ink, double period = kDefaultSamplePeriod);

/// Rotation by `radians` about the center of the ink's bounds. Empty inks
/// are returned unchanged.
DigitalInk rotate(const DigitalInk& ink, double radians);

struct NormalizeOptions {
  ResampleSpec resample;
  SimplifySpec simplify;
  int canvas_size = kDefaultCanvasSize;
  double rotation_rad = 0.0;  // applied after simplification, before fitting
};

/// resample -> simplify -> (rotate) -> fit. The simplify tolerance is in
/// canvas units, so it is converted to source units using the scale the
/// resampled ink would receive when fitted.
FittedInk normalize(const DigitalInk& ink, const NormalizeOptions& options = {});

}  // namespace inkforge
