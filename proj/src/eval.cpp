#include "inkforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/kernels.hpp"
#include "inkforge/tokens.hpp"
#include "json.hpp"

namespace inkforge::eval {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

F1Report char_f1(const std::vector<CharBox>& pred, const std::vector<CharBox>& truth,
                 double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw DataError("IoU threshold must lie in (0, 1)");
  F1Report r;
  if (pred.empty() && truth.empty()) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  std::vector<MatchedPair> candidates;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (pred[i].character != truth[j].character) continue;
      const double v = iou(pred[i].box, truth[j].box);
      if (v >= iou_threshold) candidates.push_back({i, j, v});
    }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const MatchedPair& a, const MatchedPair& b) { return a.iou > b.iou; });
  std::vector<char> pred_used(pred.size(), 0), truth_used(truth.size(), 0);
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || truth_used[c.truth]) continue;
    pred_used[c.pred] = truth_used[c.truth] = 1;
    r.matches.push_back(c);
  }
  const double m = static_cast<double>(r.matches.size());
  r.precision = pred.empty() ? 0.0 : m / static_cast<double>(pred.size());
  r.recall = truth.empty() ? 0.0 : m / static_cast<double>(truth.size());
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.unmatched_pred = pred.size() - r.matches.size();
  r.unmatched_truth = truth.size() - r.matches.size();
  return r;
}

std::vector<Point> densify(const DigitalInk& ink, double step) {
  if (!(step > 0.0)) throw DataError("densify step must be positive");
  std::vector<Point> out;
  for (const auto& stroke : ink.strokes) {
    const auto& pts = stroke.points;
    if (pts.empty()) continue;
    out.push_back(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Point& a = pts[i - 1];
      const Point& b = pts[i];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
      for (std::size_t k = 1; k <= pieces; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(pieces);
        out.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.t + u * (b.t - a.t)});
      }
    }
  }
  return out;
}

double chamfer(const DigitalInk& a, const DigitalInk& b, double step) {
  if (total_points(a) == 0 || total_points(b) == 0) throw DataError("chamfer distance of an empty ink");
  auto as_vec = [](const std::vector<Point>& pts) {
    std::vector<kernels::Vec2> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.push_back({p.x, p.y});
    return v;
  };
  const auto sa = as_vec(densify(a, step));
  const auto sb = as_vec(densify(b, step));
  std::vector<double> da(sa.size()), db(sb.size());
  kernels::nearest_distances(sa, sb, da);
  kernels::nearest_distances(sb, sa, db);
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double d : v) s += d;
    return s / static_cast<double>(v.size());
  };
  return 0.5 * (mean(da) + mean(db));
}

StrokeStats stroke_stats(const DigitalInk& ink) {
  StrokeStats s;
  s.stroke_count = ink.strokes.size();
  s.point_count = total_points(ink);
  for (const auto& stroke : ink.strokes)
    for (std::size_t i = 1; i < stroke.points.size(); ++i)
      s.total_length += std::hypot(stroke.points[i].x - stroke.points[i - 1].x,
                                   stroke.points[i].y - stroke.points[i - 1].y);
  if (s.stroke_count > 0)
    s.mean_points_per_stroke = static_cast<double>(s.point_count) / static_cast<double>(s.stroke_count);
  return s;
}

std::vector<CharBox> parse_char_boxes(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("$: expected an array of character boxes");
  std::vector<CharBox> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string at = "$[" + std::to_string(i) + "]";
    const auto& item = doc[i];
    if (!item.is_object()) throw SchemaError(at + ": expected an object");
    if (!item.contains("box") || !item["box"].is_array() || item["box"].size() != 4)
      throw SchemaError(at + ".box: expected [x_min, y_min, x_max, y_max]");
    double v[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& n = item["box"][k];
      if (!n.is_number()) throw SchemaError(at + ".box[" + std::to_string(k) + "]: expected a number");
      v[k] = n.get<double>();
    }
    CharBox cb{{v[0], v[1], v[2], v[3]}, {}};
    if (!cb.box.valid()) throw SchemaError(at + ".box: min exceeds max or value not finite");
    if (!item.contains("char") || !item["char"].is_string())
      throw SchemaError(at + ".char: expected a string");
    cb.character = item["char"].get<std::string>();
    std::u32string decoded;
    try {
      decoded = utf8_to_u32(cb.character);
    } catch (const DataError&) {
      throw SchemaError(at + ".char: invalid UTF-8");
    }
    if (decoded.size() != 1) throw SchemaError(at + ".char: expected exactly one character");
    out.push_back(std::move(cb));
  }
  return out;
}

std::vector<CharBox> load_char_boxes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_char_boxes(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string report_json(const F1Report& r) {
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["matched"] = r.matches.size();
  j["unmatched_pred"] = r.unmatched_pred;
  j["unmatched_truth"] = r.unmatched_truth;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& m : r.matches) pairs.push_back({{"pred", m.pred}, {"truth", m.truth}, {"iou", m.iou}});
  j["pairs"] = pairs;
  return j.dump(2) + "\n";
}

std::string report_table(const F1Report& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-16s %10s\n", "metric", "value");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10.4f\n", "precision", r.precision);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10.4f\n", "recall", r.recall);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10.4f\n", "f1", r.f1);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10zu\n", "matched", r.matches.size());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10zu\n", "unmatched_pred", r.unmatched_pred);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %10zu\n", "unmatched_truth", r.unmatched_truth);
  out += buf;
  return out;
}

}  // namespace inkforge::eval
