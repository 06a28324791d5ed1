// cli_test.cpp

// Copyright 2026  The revspeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "revspeech/audio.hpp"
#include "revspeech/cli.hpp"
#include "revspeech/srsdoc.hpp"
#include "support/synth.hpp"
#include "support/words.hpp"

using namespace revspeech;
using namespace revspeech::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "revspeech");
  std::ostringstream out, err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path Dir() {
  static const std::filesystem::path dir = ScratchDir("cli_test");
  return dir;
}

std::filesystem::path SampleWav() {
  static const std::filesystem::path path = [] {
    std::mt19937_64 rng(3);
    const auto p = Dir() / "sample.wav";
    WriteWav(Utterance({"login", "accept"}, rng), p);
    return p;
  }();
  return path;
}

// Trains one model per synthetic word through the command line.
std::vector<std::string> TrainedModels() {
  static const std::vector<std::string> models = [] {
    const auto sets = WriteTrainingSet(Dir(), 4, 11);
    std::vector<std::string> paths;
    for (std::size_t w = 0; w < sets.size(); ++w) {
      std::vector<std::string> args = {"--seed", "7", "train", "--label", SyntheticWords()[w]};
      for (const auto &p : sets[w]) {
        args.push_back("--in");
        args.push_back(p.string());
      }
      const std::string out = (Dir() / (SyntheticWords()[w] + ".gmm.json")).string();
      args.push_back("--out");
      args.push_back(out);
      const Run r = Cli(args);
      REQUIRE_MESSAGE(r.code == 0, r.err);
      paths.push_back(out);
    }
    return paths;
  }();
  return models;
}

std::string EffectiveValue(const std::string &err, const std::string &key) {
  std::istringstream in(err);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  return "<missing>";
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(Cli({}).code == kExitUsage);
  CHECK(Cli({"transmogrify"}).code == kExitUsage);
  CHECK(Cli({"reverse", "--in", "x.wav"}).code == kExitUsage);
  CHECK(Cli({"features", "--in", "x.wav", "--format", "xml"}).code == kExitUsage);
  const Run r = Cli({"recognize", "--in", "x.wav"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--model") != std::string::npos);
}

TEST_CASE("help exits with code 0") {
  const Run r = Cli({"--help"});
  CHECK(r.code == kExitOk);
  for (const char *sub : {"enhance", "reverse", "features", "train", "recognize", "analyze"})
    CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("data errors exit with code 2") {
  const Run missing = Cli({"reverse", "--in", (Dir() / "nope.wav").string(), "--out", (Dir() / "o.wav").string()});
  CHECK(missing.code == kExitDataError);
  CHECK(missing.err.rfind("error: ", 0) == 0);

  WriteFile(Dir() / "garbage.wav", "RIFF not really a wave file");
  CHECK(Cli({"features", "--in", (Dir() / "garbage.wav").string()}).code == kExitDataError);
  CHECK(Cli({"--set", "enhance.gamma=1", "reverse", "--in", SampleWav().string(), "--out",
             (Dir() / "o.wav").string()})
            .code == kExitDataError);
  CHECK(Cli({"--set", "features.num_ceps=99", "features", "--in", SampleWav().string()}).code == kExitDataError);
  CHECK(Cli({"recognize", "--in", SampleWav().string(), "--model", (Dir() / "none.json").string(), "--model",
             (Dir() / "none2.json").string()})
            .code == kExitDataError);
}

TEST_CASE("reversing twice restores the original file byte for byte") {
  const auto once = Dir() / "once.wav", twice = Dir() / "twice.wav";
  REQUIRE(Cli({"reverse", "--in", SampleWav().string(), "--out", once.string()}).code == 0);
  REQUIRE(Cli({"reverse", "--in", once.string(), "--out", twice.string()}).code == 0);
  CHECK(ReadFile(twice) == ReadFile(SampleWav()));
  CHECK(ReadFile(once) != ReadFile(SampleWav()));
}

TEST_CASE("configuration precedence: defaults < file < --set < flags") {
  WriteFile(Dir() / "p.conf", "seed = 3\nfeatures.num_filters = 30\ngmm.num_components = 6\n");
  const std::string conf = (Dir() / "p.conf").string();
  const std::vector<std::string> tail = {"reverse", "--in", SampleWav().string(), "--out", (Dir() / "p.wav").string()};
  auto verbose = [&](std::vector<std::string> head) {
    head.insert(head.end(), tail.begin(), tail.end());
    const Run r = Cli(head);
    REQUIRE(r.code == 0);
    CHECK(r.err.find("# effective configuration (fingerprint ") != std::string::npos);
    return r.err;
  };
  std::string err = verbose({"-v"});
  CHECK(EffectiveValue(err, "seed") == "0");
  CHECK(EffectiveValue(err, "features.num_filters") == "26");
  err = verbose({"-v", "--config", conf});
  CHECK(EffectiveValue(err, "seed") == "3");
  CHECK(EffectiveValue(err, "features.num_filters") == "30");
  err = verbose({"-v", "--config", conf, "--set", "seed=4", "--set", "features.num_filters=28"});
  CHECK(EffectiveValue(err, "seed") == "4");
  CHECK(EffectiveValue(err, "features.num_filters") == "28");
  CHECK(EffectiveValue(err, "gmm.num_components") == "6");
  err = verbose({"-v", "--config", conf, "--set", "seed=4", "--seed", "5"});
  CHECK(EffectiveValue(err, "seed") == "5");
  // Without -v nothing is printed.
  std::vector<std::string> quiet = tail;
  CHECK(Cli(quiet).err.empty());
}

TEST_CASE("features subcommand emits JSON and CSV") {
  const AudioBuffer buf = ReadWav(SampleWav());
  const Eigen::Index frames = FrameCount(buf.size(), FrameLength(25.0, buf.sample_rate_hz),
                                         FrameHop(FrameLength(25.0, buf.sample_rate_hz), 0.5));
  const Run json = Cli({"features", "--in", SampleWav().string()});
  REQUIRE(json.code == 0);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["dim"] == 39);
  CHECK(doc["num_frames"] == frames);
  CHECK(doc["rows"].size() == static_cast<std::size_t>(frames));
  CHECK(doc["rows"][0].size() == 39);

  const auto csv_path = Dir() / "f.csv";
  REQUIRE(Cli({"features", "--in", SampleWav().string(), "--format", "csv", "--out", csv_path.string()}).code == 0);
  std::istringstream csv(ReadFile(csv_path));
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("c0,c1,", 0) == 0);
  CHECK(header.find(",dd12") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == frames);
}

TEST_CASE("enhance subcommand preserves length and writes the noise profile") {
  const auto out = Dir() / "clean.wav", noise = Dir() / "noise.json";
  for (const char *method : {"spectral_subtraction", "wiener"}) {
    const Run r = Cli({"enhance", "--in", SampleWav().string(), "--out", out.string(), "--method", method,
                       "--noise-out", noise.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(ReadWav(out).size() == ReadWav(SampleWav()).size());
    CHECK(NoiseProfileFromJson(ReadFile(noise)).fft_size() == 512);
  }
}

TEST_CASE("training through the command line is reproducible") {
  const auto sets = WriteTrainingSet(Dir(), 3, 21);
  auto train = [&](const std::string &seed, const std::filesystem::path &out) {
    std::vector<std::string> args = {"--seed", seed, "train", "--label", "login", "--mixtures", "3", "--out",
                                     out.string(), "--report", (Dir() / "report.json").string()};
    for (const auto &p : sets[1]) {
      args.push_back("--in");
      args.push_back(p.string());
    }
    return Cli(args);
  };
  REQUIRE(train("9", Dir() / "a.json").code == 0);
  REQUIRE(train("9", Dir() / "b.json").code == 0);
  CHECK(ReadFile(Dir() / "a.json") == ReadFile(Dir() / "b.json"));
  const GmmModel m = LoadModel(Dir() / "a.json");
  CHECK(m.label == "login");
  CHECK(m.num_components() == 3);
  CHECK(m.seed == 9);
  const auto report = nlohmann::json::parse(ReadFile(Dir() / "report.json"));
  CHECK(report["seed"] == 9);
  CHECK(report["log_likelihood_trace"].size() >= 1);

  WriteWav(MakeBuffer(Eigen::VectorXd::Constant(10, 0.1), kWordRate), Dir() / "empty.wav");
  CHECK(Cli({"train", "--label", "x", "--in", (Dir() / "empty.wav").string(), "--out", (Dir() / "x.json").string()})
            .code == kExitDataError);
}

TEST_CASE("recognize and analyze with trained models") {
  const auto models = TrainedModels();
  std::vector<std::string> model_args;
  for (const auto &m : models) {
    model_args.push_back("--model");
    model_args.push_back(m);
  }
  std::vector<std::string> args = {"recognize", "--in", SampleWav().string()};
  args.insert(args.end(), model_args.begin(), model_args.end());
  const Run fwd = Cli(args);
  REQUIRE_MESSAGE(fwd.code == 0, fwd.err);
  const Transcript t = TranscriptFromJson(fwd.out);
  REQUIRE(t.segments.size() == 2);
  CHECK(t.segments[0].label == "login");
  CHECK(t.segments[1].label == "accept");

  args.push_back("--direction");
  args.push_back("reverse");
  const Transcript r = TranscriptFromJson(Cli(args).out);
  REQUIRE(r.segments.size() == 2);
  CHECK(r.segments[0].label == "reject");
  CHECK(r.segments[1].label == "login");

  const auto md = Dir() / "report.md", js = Dir() / "report.json";
  args = {"analyze", "--in", SampleWav().string(), "--out-md", md.string(), "--out-json", js.string()};
  args.insert(args.end(), model_args.begin(), model_args.end());
  const Run a = Cli(args);
  REQUIRE_MESSAGE(a.code == 0, a.err);
  const SrsReport report = ParseStructuredReport(ReadFile(js));
  CHECK(report.source_file == "sample.wav");
  CHECK(report.timestamp == "unspecified");
  CHECK(report.requirements.size() == 2);
  REQUIRE(report.flagged.size() == 1);
  CHECK(report.flagged[0].forward_segment.label == "accept");
  CHECK(ReadFile(md) == Render(report, ReportFormat::kMarkdown));

  // Without output paths the markdown goes to stdout.
  args = {"analyze", "--in", SampleWav().string()};
  args.insert(args.end(), model_args.begin(), model_args.end());
  CHECK(Cli(args).out == ReadFile(md));
}
