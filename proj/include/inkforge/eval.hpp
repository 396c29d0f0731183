#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inkforge/ink.hpp"

namespace inkforge::eval {

struct CharBox {
  BoundingBox box;
  std::string character;  // one UTF-8 encoded character
};

struct MatchedPair {
  std::size_t pred = 0;
  std::size_t truth = 0;
  double iou = 0.0;
};

struct F1Report {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<MatchedPair> matches;
  std::size_t unmatched_pred = 0;
  std::size_t unmatched_truth = 0;
};

double iou(const BoundingBox& a, const BoundingBox& b);

/// Character-level F1. Pairs qualify when IoU >= threshold and the
/// characters are equal (case-sensitive); qualifying pairs are matched
/// one-to-one greedily by descending IoU (ties: lower pred index, then lower
/// truth index). Both sides empty scores 1; one side empty scores 0.
///
/// Greedy matching is maximal, not always maximum: when several predictions
/// of one character overlap several truths at the threshold it can match
/// fewer pairs than an optimal assignment. With non-overlapping truth boxes
/// each prediction qualifies for at most one truth and the two agree.
F1Report char_f1(const std::vector<CharBox>& pred, const std::vector<CharBox>& truth,
                 double iou_threshold = 0.5);

/// Symmetric mean nearest-neighbour distance between the inks' polylines,
/// densified so consecutive samples are at most `step` apart. Throws
/// DataError on an empty ink or a non-positive step.
double chamfer(const DigitalInk& a, const DigitalInk& b, double step = 0.5);

/// Points along every stroke, at most `step` apart, vertices included.
std::vector<Point> densify(const DigitalInk& ink, double step);

struct StrokeStats {
  std::size_t stroke_count = 0;
  std::size_t point_count = 0;
  double total_length = 0.0;
  double mean_points_per_stroke = 0.0;
};

StrokeStats stroke_stats(const DigitalInk& ink);

/// JSON array of {"box": [x_min, y_min, x_max, y_max], "char": "a"}.
/// Throws SchemaError naming the JSON path of the first problem.
std::vector<CharBox> parse_char_boxes(std::string_view json_text);
std::vector<CharBox> load_char_boxes(const std::filesystem::path& path);

std::string report_json(const F1Report& report);
std::string report_table(const F1Report& report);

}  // namespace inkforge::eval
