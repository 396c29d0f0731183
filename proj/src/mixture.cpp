#include "inkforge/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/image_io.hpp"
#include "inkforge/inkml.hpp"
#include "inkforge/kernels.hpp"
#include "random.hpp"

namespace inkforge {
namespace {

std::vector<std::filesystem::path> files_with_extension(const std::filesystem::path& dir,
                                                        const std::string& ext) {
  std::vector<std::filesystem::path> out;
  if (dir.empty()) return out;
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string escape_value(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '\r') out += "\\r";
    else out.push_back(c);
  }
  return out;
}

void check_label(const std::string& label, const Vocabulary& vocab) {
  for (char32_t c : utf8_to_u32(label))
    if (!vocab.has_symbol(c))
      throw DataError("label '" + label + "' has a character outside the vocabulary");
}

}  // namespace

SourcePool load_sources(const std::filesystem::path& ink_dir, const std::filesystem::path& ocr_dir) {
  SourcePool pool;
  for (const auto& path : files_with_extension(ink_dir, ".inkml")) {
    const auto doc = read_inkml_file(path);
    for (std::size_t k = 0; k < doc.inks.size(); ++k) {
      InkSample s;
      s.id = path.stem().string() + (doc.inks.size() > 1 ? "#" + std::to_string(k) : "");
      s.ink = doc.inks[k];
      if (auto it = s.ink.metadata.find("label"); it != s.ink.metadata.end() && !it->second.empty())
        s.label = it->second;
      pool.inks.push_back(std::move(s));
    }
  }
  for (const auto& path : files_with_extension(ocr_dir, ".png")) {
    auto label_path = path;
    label_path.replace_extension(".txt");
    if (!std::filesystem::exists(label_path)) throw DataError("missing label file " + label_path.string());
    ImageSample s;
    s.id = path.stem().string();
    s.image = read_png(path);
    s.label = std::string(detail::trim(read_text(label_path)));
    if (s.label.empty()) throw DataError("empty label in " + label_path.string());
    pool.images.push_back(std::move(s));
  }
  return pool;
}

TrainingExample make_example(const InkSample& source, Task task, std::uint64_t seed,
                             const ExampleConfig& config, std::size_t index) {
  if (!task_is_synthetic(task)) throw DataError("task recognize_real needs an image source");
  if (total_points(source.ink) == 0) throw DataError("sample " + source.id + " has an empty ink");
  const bool needs_label = task != Task::VanillaDerender;
  if (needs_label && !source.label)
    throw DataError("sample " + source.id + " has no label for task " + std::string(task_name(task)));
  if (needs_label) check_label(*source.label, config.vocab);

  const AugmentationSpec aug = sample_augmentation(seed, config.probabilities);
  NormalizeOptions opts;
  opts.resample = config.resample;
  opts.simplify = config.simplify;
  opts.canvas_size = config.vocab.n();
  opts.rotation_rad = aug.rotation_rad;
  const FittedInk fitted = normalize(source.ink, opts);

  const double to_image = static_cast<double>(config.image_size) / config.vocab.n();
  const DigitalInk image_ink = transform(fitted.ink, {to_image, 0.0, 0.0, config.image_size});

  TrainingExample ex;
  ex.task = task;
  ex.provenance = {source.id, seed, index};
  ex.image = render(image_ink, config.image_size, aug);
  TaskPrompt prompt{task, std::nullopt};
  if (task == Task::DerenderWithText) prompt.text_payload = *source.label;
  ex.prompt = build_prompt(prompt);
  const TokenSeq ink_tokens = task_outputs_ink(task) ? encode_ink(fitted.ink, config.vocab) : TokenSeq{};
  const std::string text = task_outputs_text(task) ? *source.label : std::string();
  ex.target = build_target(prompt, ink_tokens, text);
  return ex;
}

TrainingExample make_example(const ImageSample& source, Task task, std::uint64_t seed,
                             const ExampleConfig& config, std::size_t index) {
  if (task != Task::RecognizeReal)
    throw DataError("image sources only feed task recognize_real");
  if (source.label.empty()) throw DataError("sample " + source.id + " has no label");
  check_label(source.label, config.vocab);
  TrainingExample ex;
  ex.task = task;
  ex.provenance = {source.id, seed, index};
  ex.image = fit_image(source.image, config.image_size).image;
  ex.prompt = build_prompt({task, std::nullopt});
  ex.target = build_target({task, std::nullopt}, {}, source.label);
  return ex;
}

std::string check_example(const TrainingExample& ex, const ExampleConfig& config) {
  if (ex.image.width != config.image_size || ex.image.height != config.image_size)
    return "image is not " + std::to_string(config.image_size) + " pixels square";
  const SplitTarget split = split_target(ex.target);
  const bool wants_text = task_outputs_text(ex.task);
  const bool wants_ink = task_outputs_ink(ex.task);
  if (wants_text != !split.text.empty()) return wants_text ? "target lacks text" : "target has text";
  if (wants_ink != !split.ink.empty()) return wants_ink ? "target lacks ink" : "target has ink";
  for (char32_t c : split.text)
    if (!config.vocab.has_symbol(c)) return "target text outside the vocabulary";
  if (wants_ink) {
    try {
      decode_ink(split.ink, config.vocab, DecodeMode::Strict);
    } catch (const DataError& e) {
      return std::string("ink target does not decode: ") + e.what();
    }
  }
  return {};
}

MixtureStream::MixtureStream(MixtureSpec spec, const SourcePool& pool, ExampleConfig config)
    : spec_(spec), pool_(&pool), config_(std::move(config)) {
  double total = 0.0;
  for (double w : spec_.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DataError("mixture weights must sum to 1");

  for (std::size_t i = 0; i < pool.inks.size(); ++i) {
    const auto& s = pool.inks[i];
    if (total_points(s.ink) == 0) continue;
    eligible_[static_cast<std::size_t>(Task::VanillaDerender)].push_back(i);
    if (!s.label) continue;
    for (Task t : {Task::DerenderWithText, Task::RecognizeSyn, Task::RecognizeAndDerender})
      eligible_[static_cast<std::size_t>(t)].push_back(i);
  }
  for (std::size_t i = 0; i < pool.images.size(); ++i)
    eligible_[static_cast<std::size_t>(Task::RecognizeReal)].push_back(i);

  for (Task t : kAllTasks)
    if (spec_.weight(t) > 0.0 && eligible_[static_cast<std::size_t>(t)].empty())
      throw DataError("no usable source for task " + std::string(task_name(t)));
}

Draw MixtureStream::next_draw() {
  const std::size_t index = drawn_++;
  detail::Rng rng(kernels::mix64(spec_.rng_seed ^ kernels::mix64(index)));
  const double u = rng.uniform();
  Task task = Task::VanillaDerender;
  double acc = 0.0;
  for (Task t : kAllTasks) {
    if (spec_.weight(t) <= 0.0) continue;
    task = t;
    acc += spec_.weight(t);
    if (u < acc) break;
  }
  const auto& pool = eligible_[static_cast<std::size_t>(task)];
  Draw d;
  d.index = index;
  d.task = task;
  d.source = pool[rng.index(pool.size())];
  d.seed = rng.next();
  return d;
}

TrainingExample MixtureStream::materialize(const Draw& d) const {
  TrainingExample ex = d.task == Task::RecognizeReal
                           ? make_example(pool_->images[d.source], d.task, d.seed, config_, d.index)
                           : make_example(pool_->inks[d.source], d.task, d.seed, config_, d.index);
  if (auto problem = check_example(ex, config_); !problem.empty())
    throw DataError("example " + std::to_string(d.index) + ": " + problem);
  return ex;
}

std::vector<TrainingExample> MixtureStream::take(std::size_t count, int jobs) {
  std::vector<Draw> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) draws.push_back(next_draw());

  std::vector<TrainingExample> out(count);
  std::vector<std::string> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = materialize(draws[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  return out;
}

std::string format_record(const TrainingExample& ex) {
  char index[32];
  std::snprintf(index, sizeof index, "%08zu", ex.provenance.index);
  std::string out;
  out += "index=" + std::string(index) + "\n";
  out += "task=" + std::string(task_name(ex.task)) + "\n";
  out += "prompt=" + escape_value(ex.prompt) + "\n";
  out += "target=" + format_tokens(ex.target) + "\n";
  out += "source=" + escape_value(ex.provenance.source_id) + "\n";
  out += "seed=" + std::to_string(ex.provenance.seed) + "\n";
  return out;
}

void write_example(const std::filesystem::path& dir, const TrainingExample& ex) {
  char stem[32];
  std::snprintf(stem, sizeof stem, "%08zu", ex.provenance.index);
  write_png(dir / (std::string(stem) + ".png"), ex.image);
  std::ofstream rec(dir / (std::string(stem) + ".rec"), std::ios::binary);
  if (!rec) throw DataError("cannot write record into " + dir.string());
  rec << format_record(ex);
}

}  // namespace inkforge
