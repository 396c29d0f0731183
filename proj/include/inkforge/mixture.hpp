#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inkforge/ink.hpp"
#include "inkforge/normalize.hpp"
#include "inkforge/raster.hpp"
#include "inkforge/tokens.hpp"

namespace inkforge {

struct InkSample {
  std::string id;
  DigitalInk ink;
  std::optional<std::string> label;
};

struct ImageSample {
  std::string id;
  RasterImage image;
  std::string label;
};

struct SourcePool {
  std::vector<InkSample> inks;
  std::vector<ImageSample> images;
};

/// Loads every `*.inkml` under `ink_dir` (labels from the "label"
/// annotation) and every `*.png` under `ocr_dir` with its `<stem>.txt`
/// label. Files are visited in lexicographic order. Either path may be empty.
SourcePool load_sources(const std::filesystem::path& ink_dir, const std::filesystem::path& ocr_dir);

struct ExampleConfig {
  Vocabulary vocab{kDefaultCanvasSize};
  int image_size = 224;  // M
  ResampleSpec resample;
  SimplifySpec simplify;
  AugmentationProbabilities probabilities;
};

struct Provenance {
  std::string source_id;
  std::uint64_t seed = 0;
  std::size_t index = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TrainingExample {
  RasterImage image;
  std::string prompt;
  TokenSeq target;
  Task task = Task::VanillaDerender;
  Provenance provenance;
};

/// Synthetic tasks: sample an augmentation from `seed`, normalize the ink
/// with the sampled rotation, render it at M x M and encode the target.
/// Throws DataError for an empty ink, a missing label on a text task, a
/// label outside the vocabulary, or RecognizeReal (needs an image).
TrainingExample make_example(const InkSample& source, Task task, std::uint64_t seed,
                             const ExampleConfig& config = {}, std::size_t index = 0);

/// RecognizeReal: fit_image to M x M, text target.
TrainingExample make_example(const ImageSample& source, Task task, std::uint64_t seed,
                             const ExampleConfig& config = {}, std::size_t index = 0);

/// Empty string when the example satisfies the task/target rules, otherwise
/// the first violation.
std::string check_example(const TrainingExample& example, const ExampleConfig& config);

struct MixtureSpec {
  std::array<double, 5> weights{0.2, 0.2, 0.2, 0.2, 0.2};  // indexed like kAllTasks
  std::uint64_t rng_seed = 0;

  double& weight(Task t) { return weights[static_cast<std::size_t>(t)]; }
  double weight(Task t) const { return weights[static_cast<std::size_t>(t)]; }
};

/// What one draw selected; cheap to produce, expensive to materialize.
struct Draw {
  std::size_t index = 0;
  Task task = Task::VanillaDerender;
  std::size_t source = 0;  // into pool.inks, or pool.images for RecognizeReal
  std::uint64_t seed = 0;
};

/// i.i.d. task draws by weight, deterministic in the seed. Construction
/// throws DataError when a task with nonzero weight has no usable source or
/// the weights are not a distribution.
class MixtureStream {
 public:
  MixtureStream(MixtureSpec spec, const SourcePool& pool, ExampleConfig config = {});

  Draw next_draw();
  /// Materializes and validates one draw.
  TrainingExample materialize(const Draw& draw) const;
  TrainingExample next() { return materialize(next_draw()); }
  /// Draws `count` examples in order and renders them on up to `jobs`
  /// threads; the output order is the draw order.
  std::vector<TrainingExample> take(std::size_t count, int jobs = 1);

  const ExampleConfig& config() const noexcept { return config_; }

 private:
  MixtureSpec spec_;
  const SourcePool* pool_;
  ExampleConfig config_;
  std::array<std::vector<std::size_t>, 5> eligible_;
  std::size_t drawn_ = 0;
};

/// Sidecar record, fixed key order (see docs/formats/mixture-record.md).
std::string format_record(const TrainingExample& example);
/// Writes `{index:08}.png` and `{index:08}.rec` into `dir`.
void write_example(const std::filesystem::path& dir, const TrainingExample& example);

}  // namespace inkforge
