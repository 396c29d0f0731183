#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "inkforge/cli.hpp"
#include "inkforge/inkml.hpp"
#include "inkforge/normalize.hpp"

using namespace inkforge;
namespace fs = std::filesystem;

namespace {

const std::string kData = INKFORGE_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("inkforge_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("tokenize then detokenize") {
  const fs::path dir = scratch("tok");
  const Run tok = run({"tokenize", kData + "/hello.inkml", "-o", (dir / "t.txt").string()});
  REQUIRE(tok.code == 0);
  const Run detok = run({"detokenize", (dir / "t.txt").string()});
  REQUIRE(detok.code == 0);
  const DigitalInk back = parse_inkml(detok.out).inks.at(0);
  const DigitalInk want = normalize(read_ink_file(kData + "/hello.inkml")).ink;
  REQUIRE(back.strokes.size() == want.strokes.size());
  for (std::size_t s = 0; s < want.strokes.size(); ++s) {
    REQUIRE(back.strokes[s].points.size() == want.strokes[s].points.size());
    for (std::size_t i = 0; i < want.strokes[s].points.size(); ++i) {
      CHECK(std::abs(back.strokes[s].points[i].x - want.strokes[s].points[i].x) <= 0.5 + 1e-9);
      CHECK(std::abs(back.strokes[s].points[i].y - want.strokes[s].points[i].y) <= 0.5 + 1e-9);
    }
  }
}

TEST_CASE("detokenize diagnostics and strict mode") {
  const fs::path dir = scratch("detok");
  std::ofstream(dir / "bad.txt") << "b x3 y4 b x5\n";
  const Run tolerant = run({"detokenize", (dir / "bad.txt").string()});
  CHECK(tolerant.code == 0);
  CHECK(tolerant.err.find("token 4") != std::string::npos);
  CHECK(run({"detokenize", "--strict", (dir / "bad.txt").string()}).code == 2);
}

TEST_CASE("derender-page with zero boxes") {
  const fs::path dir = scratch("page");
  REQUIRE(run({"render", kData + "/hello.inkml", "-o", (dir / "p.png").string()}).code == 0);
  std::ofstream(dir / "boxes.json") << "[]";
  const Run r = run({"derender-page", (dir / "p.png").string(), "--boxes", (dir / "boxes.json").string(),
                     "-o", (dir / "out.inkml").string(), "--svg", (dir / "out.svg").string()});
  CHECK(r.code == 0);
  const auto doc = read_inkml_file(dir / "out.inkml");
  REQUIRE(doc.inks.size() == 1);
  CHECK(doc.inks[0].strokes.empty());
  CHECK(slurp(dir / "out.svg").find("<svg") == 0);
}

TEST_CASE("derender-page exit codes") {
  const fs::path dir = scratch("page_backend");
  REQUIRE(run({"render", kData + "/hello.inkml", "-o", (dir / "p.png").string()}).code == 0);
  const std::string boxes = kData + "/page_boxes.json";
  CHECK(run({"derender-page", (dir / "p.png").string(), "--boxes", boxes, "-o", (dir / "a.inkml").string()}).code == 0);
  const Run failing = run({"derender-page", (dir / "p.png").string(), "--boxes", boxes, "--backend",
                           "subprocess:false", "-o", (dir / "b.inkml").string()});
  CHECK(failing.code == 3);
  CHECK(failing.err.find("backend_error") != std::string::npos);
  CHECK(fs::exists(dir / "b.inkml"));
  const Run fake = run({"derender-page", (dir / "p.png").string(), "--boxes", boxes, "--backend",
                        "subprocess:" + kData + "/fake_backend.sh", "--jobs", "2"});
  CHECK(fake.code == 0);
  CHECK(parse_inkml(fake.out).inks.at(0).strokes.size() == 3);
  CHECK(run({"derender-page", (dir / "p.png").string(), "--backend", "neural"}).code == 1);
}

TEST_CASE("eval-f1") {
  const std::string truth = kData + "/chars_truth.json";
  const Run same = run({"eval-f1", truth, truth, "--format", "json"});
  CHECK(same.code == 0);
  CHECK(same.out.find("\"f1\": 1.0") != std::string::npos);
  const Run table = run({"eval-f1", kData + "/chars_pred.json", truth});
  CHECK(table.code == 0);
  CHECK(table.out.find("0.857") != std::string::npos);
  CHECK(run({"eval-f1", truth, kData + "/missing.json"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"tokenize"}).code == 1);
  CHECK(run({"tokenize", kData + "/hello.inkml", "--bogus"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"tokenize", kData + "/hello.inkml", "--n", "0"}).code == 1);
  CHECK(run({"tokenize", kData + "/missing.inkml"}).code == 2);
}

TEST_CASE("config precedence") {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.kv") << "# experiment\nseed=11\np_noise=0\n";
  const Run from_file = run({"augment", "--config", (dir / "run.kv").string()});
  CHECK(from_file.out.find("rng_seed=11") != std::string::npos);
  CHECK(from_file.out.find("gaussian_noise_std=off") != std::string::npos);
  const Run flag_wins = run({"augment", "--config", (dir / "run.kv").string(), "--seed", "12"});
  CHECK(flag_wins.out.find("rng_seed=12") != std::string::npos);
  ::setenv("INKFORGE_SEED", "13", 1);
  CHECK(run({"augment"}).out.find("rng_seed=13") != std::string::npos);
  CHECK(run({"augment", "--config", (dir / "run.kv").string()}).out.find("rng_seed=11") != std::string::npos);
  ::unsetenv("INKFORGE_SEED");
  std::ofstream(dir / "bad.kv") << "colour=red\n";
  CHECK(run({"augment", "--config", (dir / "bad.kv").string()}).code == 1);
}

TEST_CASE("make-mixture is deterministic across job counts") {
  const fs::path a = scratch("mix_a"), b = scratch("mix_b");
  const std::vector<std::string> base{"make-mixture", "--inks", kData, "--ocr", kData + "/ocr",
                                      "--count", "6", "--seed", "5", "--m", "64"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"-o", a.string(), "--jobs", "1"});
  args_b.insert(args_b.end(), {"-o", b.string(), "--jobs", "3"});
  REQUIRE(run(args_a).code == 0);
  REQUIRE(run(args_b).code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  CHECK(files == 12);
  CHECK(run({"make-mixture", "--count", "2", "-o", a.string()}).code == 1);
  CHECK(run({"make-mixture", "--inks", kData, "--count", "2", "-o", a.string(), "--weights", "1,0,0"}).code == 1);
}

TEST_CASE("convert and derender") {
  const fs::path dir = scratch("convert");
  CHECK(run({"convert", kData + "/hello.inkml", "-o", (dir / "h.inkml").string()}).code == 0);
  CHECK(read_ink_file(dir / "h.inkml") == read_ink_file(kData + "/hello.inkml"));
  CHECK(run({"convert", kData + "/hello.inkml", "-o", (dir / "h.svg").string()}).code == 0);
  CHECK(run({"render", kData + "/hello.inkml", "-o", (dir / "h.png").string()}).code == 0);
  const Run d = run({"derender", (dir / "h.png").string(), "--svg", (dir / "d.svg").string()});
  CHECK(d.code == 0);
  CHECK_FALSE(parse_inkml(d.out).inks.at(0).strokes.empty());
}

}
