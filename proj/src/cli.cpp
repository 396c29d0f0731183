#include "inkforge/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/eval.hpp"
#include "inkforge/geo.hpp"
#include "inkforge/image_io.hpp"
#include "inkforge/inkml.hpp"
#include "inkforge/mixture.hpp"
#include "inkforge/normalize.hpp"
#include "inkforge/page.hpp"
#include "inkforge/svg.hpp"
#include "inkforge/tokens.hpp"

namespace inkforge::cli {
namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("cannot write " + path);
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text(path, text);
}

std::string extension(const std::string& path) {
  return std::filesystem::path(path).extension().string();
}

template <typename T>
T parse_number(const std::string& key, std::string_view value) {
  if constexpr (std::is_floating_point_v<T>) {
    if (auto v = detail::parse_double(value)) return *v;
  } else {
    if (auto v = detail::parse_int<T>(value)) return *v;
  }
  throw UsageError("config key '" + key + "': invalid value '" + std::string(value) + "'");
}

void validate(const Config& c) {
  if (c.n < 1) throw UsageError("n must be at least 1");
  if (c.m < 8) throw UsageError("m must be at least 8");
  if (!(c.sample_period > 0.0)) throw UsageError("period must be positive");
  if (!(c.simplify_epsilon >= 0.0)) throw UsageError("epsilon must be non-negative");
  for (double p : {c.probabilities.lines, c.probabilities.grids, c.probabilities.noise,
                   c.probabilities.blur})
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("augmentation probabilities must lie in [0, 1]");
}

NormalizeOptions normalize_options(const Config& c) {
  NormalizeOptions o;
  o.resample.period = c.sample_period;
  o.simplify.epsilon = c.simplify_epsilon;
  o.canvas_size = c.n;
  return o;
}

std::unique_ptr<page::DerenderBackend> make_backend(const std::string& spec, const Config& c) {
  if (spec == "geo") return std::make_unique<page::GeoBackend>();
  const std::string prefix = "subprocess:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size())
    return std::make_unique<page::SubprocessBackend>(spec.substr(prefix.size()), Vocabulary(c.n));
  throw UsageError("unknown backend '" + spec + "' (expected geo or subprocess:CMD)");
}

std::array<double, 5> parse_weights(const std::string& text) {
  std::array<double, 5> w{};
  std::size_t k = 0;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = detail::trim(rest.substr(0, comma));
    if (k >= w.size()) throw UsageError("--weights needs exactly 5 values");
    const auto v = detail::parse_double(item);
    if (!v) throw UsageError("--weights: invalid value '" + std::string(item) + "'");
    w[k++] = *v;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (k != w.size()) throw UsageError("--weights needs exactly 5 values");
  return w;
}

}  // namespace

Config apply_config_text(Config c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(detail::trim(s.substr(0, eq)));
    const auto value = detail::trim(s.substr(eq + 1));
    if (key == "n") c.n = parse_number<int>(key, value);
    else if (key == "m") c.m = parse_number<int>(key, value);
    else if (key == "period") c.sample_period = parse_number<double>(key, value);
    else if (key == "epsilon") c.simplify_epsilon = parse_number<double>(key, value);
    else if (key == "p_lines") c.probabilities.lines = parse_number<double>(key, value);
    else if (key == "p_grids") c.probabilities.grids = parse_number<double>(key, value);
    else if (key == "p_noise") c.probabilities.noise = parse_number<double>(key, value);
    else if (key == "p_blur") c.probabilities.blur = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"inkforge: digital ink derendering toolkit", "inkforge"};
  app.require_subcommand(1);
  app.fallthrough();

  Config flags;
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value config file");
  auto* opt_n = app.add_option("--n", flags.n, "Token canvas size N");
  auto* opt_m = app.add_option("--m", flags.m, "Model image side M");
  auto* opt_period = app.add_option("--period", flags.sample_period, "Resample period in seconds");
  auto* opt_eps = app.add_option("--epsilon", flags.simplify_epsilon, "RDP epsilon on the N canvas");
  auto* opt_seed = app.add_option("--seed", flags.seed, "RNG seed (falls back to INKFORGE_SEED)");

  std::string input, input2, output, svg_path, spec_path, boxes_path, backend_spec = "geo";
  std::string inks_dir, ocr_dir, weights_text, format = "table";
  bool raw = false, strict = false;
  int jobs = 1;
  std::size_t count = 0;
  double iou_threshold = 0.5;

  auto* convert = app.add_subcommand("convert", "Rewrite an ink file as canonical InkML, SVG or tokens");
  convert->add_option("input", input, "Input InkML")->required();
  convert->add_option("-o,--output", output, "Output path (.inkml, .svg or .txt)")->required();

  auto* tokenize = app.add_subcommand("tokenize", "Normalize an ink and print its tokens");
  tokenize->add_option("input", input, "Input InkML")->required();
  tokenize->add_option("-o,--output", output, "Output file (default stdout)");
  tokenize->add_flag("--raw", raw, "Skip normalization; the ink must already lie on the canvas");

  auto* detokenize = app.add_subcommand("detokenize", "Decode a token file into InkML");
  detokenize->add_option("input", input, "Token file")->required();
  detokenize->add_option("-o,--output", output, "Output file (default stdout)");
  detokenize->add_flag("--strict", strict, "Fail on the first malformed token");

  auto* render_cmd = app.add_subcommand("render", "Render an ink to a PNG");
  render_cmd->add_option("input", input, "Input InkML")->required();
  render_cmd->add_option("--spec", spec_path, "Augmentation spec (key=value)");
  render_cmd->add_option("-o,--output", output, "Output PNG")->required();

  auto* augment = app.add_subcommand("augment", "Sample an augmentation spec");
  augment->add_option("-o,--output", output, "Output file (default stdout)");

  auto* derender = app.add_subcommand("derender", "Derender a word image with the geometric backend");
  derender->add_option("input", input, "Word PNG")->required();
  derender->add_option("-o,--output", output, "Output InkML (default stdout)");
  derender->add_option("--svg", svg_path, "SVG overlay output");

  auto* derender_page = app.add_subcommand("derender-page", "Derender every word on a page");
  derender_page->add_option("input", input, "Page PNG")->required();
  derender_page->add_option("--boxes", boxes_path, "Word-box JSON (default: projection segmentation)");
  derender_page->add_option("--backend", backend_spec, "geo or subprocess:CMD");
  derender_page->add_option("-o,--output", output, "Output InkML (default stdout)");
  derender_page->add_option("--svg", svg_path, "SVG overlay output");
  derender_page->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* mixture = app.add_subcommand("make-mixture", "Generate training examples");
  mixture->add_option("--inks", inks_dir, "Directory of InkML files");
  mixture->add_option("--ocr", ocr_dir, "Directory of PNG word images with .txt labels");
  mixture->add_option("--count", count, "Number of examples")->required();
  mixture->add_option("-o,--output", output, "Output directory")->required();
  mixture->add_option("--weights", weights_text, "Five comma-separated task weights");
  mixture->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* eval_f1 = app.add_subcommand("eval-f1", "Character-level F1 between two box files");
  eval_f1->add_option("pred", input, "Predicted character boxes (JSON)")->required();
  eval_f1->add_option("truth", input2, "Ground-truth character boxes (JSON)")->required();
  eval_f1->add_option("--iou", iou_threshold, "IoU threshold");
  eval_f1->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Config c;
    if (const char* env = std::getenv("INKFORGE_SEED")) {
      const auto v = detail::parse_int<std::uint64_t>(detail::trim(env));
      if (!v) throw UsageError("INKFORGE_SEED is not an unsigned integer");
      c.seed = *v;
    }
    if (!config_path.empty()) c = apply_config_text(c, read_text(config_path));
    if (opt_n->count()) c.n = flags.n;
    if (opt_m->count()) c.m = flags.m;
    if (opt_period->count()) c.sample_period = flags.sample_period;
    if (opt_eps->count()) c.simplify_epsilon = flags.simplify_epsilon;
    if (opt_seed->count()) c.seed = flags.seed;
    validate(c);

    if (convert->parsed()) {
      const auto doc = read_inkml_file(input);
      const std::string ext = extension(output);
      if (ext == ".svg") {
        const DigitalInk ink = doc.inks.empty() ? DigitalInk{} : doc.inks.front();
        int w = 1, h = 1;
        if (total_points(ink) > 0) {
          const BoundingBox b = bounds(ink);
          w = std::max(1, static_cast<int>(std::ceil(b.x_max)) + 1);
          h = std::max(1, static_cast<int>(std::ceil(b.y_max)) + 1);
        }
        write_text(output, overlay_svg(ink, w, h));
      } else if (ext == ".txt") {
        const DigitalInk ink = doc.inks.empty() ? DigitalInk{} : doc.inks.front();
        write_text(output, format_tokens(encode_ink(normalize(ink, normalize_options(c)).ink,
                                                    Vocabulary(c.n))) + "\n");
      } else {
        write_text(output, serialize_inkml(doc));
      }
    } else if (tokenize->parsed()) {
      const DigitalInk ink = read_ink_file(input);
      const DigitalInk canvas = raw ? ink : normalize(ink, normalize_options(c)).ink;
      emit(output, format_tokens(encode_ink(canvas, Vocabulary(c.n))) + "\n", out);
    } else if (detokenize->parsed()) {
      const SplitTarget split = split_target(parse_tokens(read_text(input)));
      const DecodeResult r = decode_ink(split.ink, Vocabulary(c.n),
                                        strict ? DecodeMode::Strict : DecodeMode::Tolerant);
      for (const auto& d : r.diagnostics) err << "token " << d.token_index << ": " << d.message << "\n";
      emit(output, serialize_inkml({{r.ink}}), out);
    } else if (render_cmd->parsed()) {
      const AugmentationSpec spec =
          spec_path.empty() ? AugmentationSpec{} : parse_augmentation(read_text(spec_path));
      const DigitalInk ink = read_ink_file(input);
      write_png(output, render(prepare_for_render(ink, c.m, spec), c.m, spec));
    } else if (augment->parsed()) {
      emit(output, format_augmentation(sample_augmentation(c.seed, c.probabilities)), out);
    } else if (derender->parsed()) {
      const RasterImage img = read_png(input);
      const DigitalInk ink = geo::derender_word(img);
      emit(output, serialize_inkml({{ink}}), out);
      if (!svg_path.empty()) write_text(svg_path, overlay_svg(ink, img.width, img.height));
    } else if (derender_page->parsed()) {
      const RasterImage img = read_png(input);
      const auto boxes = boxes_path.empty() ? page::segment_words(img) : page::load_wordboxes(boxes_path);
      const auto backend = make_backend(backend_spec, c);
      const page::PageResult result = page::derender_page(img, boxes, *backend, c.m, jobs);
      for (std::size_t i = 0; i < result.words.size(); ++i) {
        const auto& w = result.words[i];
        if (w.skipped) err << "word " << i << ": skipped (" << w.skip_reason << ")\n";
        for (const auto& d : w.diagnostics) err << "word " << i << ": " << d << "\n";
      }
      emit(output, serialize_inkml({{result.ink}}), out);
      if (!svg_path.empty()) write_text(svg_path, overlay_svg(result, img.width, img.height));
      if (result.any_backend_error()) return kBackend;
    } else if (mixture->parsed()) {
      if (inks_dir.empty() && ocr_dir.empty()) throw UsageError("make-mixture needs --inks and/or --ocr");
      MixtureSpec spec;
      spec.rng_seed = c.seed;
      if (!weights_text.empty()) spec.weights = parse_weights(weights_text);
      ExampleConfig ec;
      ec.vocab = Vocabulary(c.n);
      ec.image_size = c.m;
      ec.resample.period = c.sample_period;
      ec.simplify.epsilon = c.simplify_epsilon;
      ec.probabilities = c.probabilities;
      const SourcePool pool = load_sources(inks_dir, ocr_dir);
      MixtureStream stream(spec, pool, ec);
      std::filesystem::create_directories(output);
      for (const auto& ex : stream.take(count, jobs)) write_example(output, ex);
    } else if (eval_f1->parsed()) {
      if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) throw UsageError("--iou must lie in (0, 1)");
      const auto report = eval::char_f1(eval::load_char_boxes(input), eval::load_char_boxes(input2),
                                        iou_threshold);
      out << (format == "json" ? eval::report_json(report) + "\n" : eval::report_table(report));
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage: return kUsage;
      case ErrorKind::Data: return kData;
      case ErrorKind::Backend: return kBackend;
    }
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace inkforge::cli
