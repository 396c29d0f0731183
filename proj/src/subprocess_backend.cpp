#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "inkforge/error.hpp"
#include "inkforge/image_io.hpp"
#include "inkforge/page.hpp"

namespace inkforge::page {
namespace {

std::atomic<unsigned> g_request_counter{0};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out += "'";
  return out;
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

// Removes the work directory on every exit path.
struct WorkDir {
  std::filesystem::path path;
  ~WorkDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace

SubprocessBackend::SubprocessBackend(std::string command, Vocabulary vocab)
    : command_(std::move(command)), vocab_(std::move(vocab)) {
  if (command_.empty()) throw UsageError("subprocess backend needs a command");
}

BackendOutput SubprocessBackend::derender(const RasterImage& image,
                                          const std::optional<std::string>& label) const {
  if (image.width != image.height) throw BackendError("backend input must be square");
  const int m = image.width;

  WorkDir dir;
  dir.path = std::filesystem::temp_directory_path() /
             ("inkforge-backend-" + std::to_string(::getpid()) + "-" +
              std::to_string(g_request_counter.fetch_add(1)));
  std::error_code ec;
  std::filesystem::remove_all(dir.path, ec);
  if (!std::filesystem::create_directories(dir.path, ec))
    throw BackendError("cannot create work directory " + dir.path.string());

  const TaskPrompt prompt = label ? TaskPrompt{Task::DerenderWithText, label}
                                  : TaskPrompt{Task::VanillaDerender, std::nullopt};
  write_png(dir.path / "input.png", image);
  {
    std::ofstream req(dir.path / "request.rec", std::ios::binary);
    req << "task=" << task_name(prompt.task) << "\n"
        << "prompt=" << escape_value(build_prompt(prompt)) << "\n"
        << "n=" << vocab_.n() << "\n"
        << "m=" << m << "\n";
    if (!req) throw BackendError("cannot write request into " + dir.path.string());
  }

  const std::string cmd = command_ + " " + shell_quote(dir.path.string());
  const int status = std::system(cmd.c_str());
  if (status != 0)
    throw BackendError("backend command exited with status " + std::to_string(status));

  std::ifstream in(dir.path / "tokens.txt", std::ios::binary);
  if (!in) throw BackendError("backend produced no tokens.txt");
  std::ostringstream ss;
  ss << in.rdbuf();

  TokenSeq tokens;
  try {
    tokens = parse_tokens(ss.str());
  } catch (const DataError& e) {
    throw BackendError(std::string("unreadable tokens.txt: ") + e.what());
  }

  BackendOutput out;
  const SplitTarget split = split_target(tokens);
  if (!split.text.empty())
    out.diagnostics.push_back("ignored " + std::to_string(split.text.size()) + " leading text tokens");
  DecodeResult decoded = decode_ink(split.ink, vocab_, DecodeMode::Tolerant);
  const std::size_t shift = tokens.size() - split.ink.size();
  for (const auto& d : decoded.diagnostics)
    out.diagnostics.push_back("token " + std::to_string(d.token_index + shift) + ": " + d.message);
  const double s = static_cast<double>(m) / vocab_.n();
  out.ink = transform(decoded.ink, {s, 0.0, 0.0, m});
  return out;
}

}  // namespace inkforge::page
