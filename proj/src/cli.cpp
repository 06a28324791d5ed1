// cli.cpp

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

#include "revspeech/cli.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "revspeech/audio.hpp"
#include "revspeech/config.hpp"
#include "revspeech/enhance.hpp"
#include "revspeech/errors.hpp"
#include "revspeech/features.hpp"
#include "revspeech/gmm.hpp"
#include "revspeech/recognizer.hpp"
#include "revspeech/srsdoc.hpp"

namespace revspeech {

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void WriteText(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw IoError("write failed: " + path);
}

std::string ShortestDouble(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string FeaturesToJson(const FeatureMatrix &features, int sample_rate_hz) {
  nlohmann::ordered_json doc;
  doc["fingerprint"] = features.fingerprint;
  doc["sample_rate_hz"] = sample_rate_hz;
  doc["num_frames"] = features.num_frames();
  doc["dim"] = features.dim();
  doc["rows"] = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < features.num_frames(); ++i) {
    const Eigen::RowVectorXd row = features.rows.row(i);
    doc["rows"].push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return doc.dump() + "\n";
}

std::string FeaturesToCsv(const FeatureMatrix &features, int num_ceps) {
  std::string out;
  const char *prefixes[] = {"c", "d", "dd"};
  for (Eigen::Index j = 0; j < features.dim(); ++j) {
    if (j) out += ",";
    out += prefixes[j / num_ceps] + std::to_string(j % num_ceps);
  }
  out += "\n";
  for (Eigen::Index i = 0; i < features.num_frames(); ++i) {
    for (Eigen::Index j = 0; j < features.dim(); ++j) {
      if (j) out += ",";
      out += ShortestDouble(features.rows(i, j));
    }
    out += "\n";
  }
  return out;
}

ToolConfig ResolveConfig(const CommonOptions &common) {
  ToolConfig cfg;
  if (!common.config_file.empty()) LoadConfigInto(cfg, common.config_file);
  for (const std::string &s : common.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    ApplySetting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (common.seed) cfg.seed = *common.seed;
  return cfg;
}

void PrintEffective(const ToolConfig &cfg, const CommonOptions &common, std::ostream &err) {
  if (!common.verbose) return;
  err << "# effective configuration (fingerprint " << ConfigFingerprint(cfg) << ")\n"
      << FormatConfig(cfg);
}

Vocabulary LoadVocabulary(const std::vector<std::string> &paths) {
  std::vector<GmmModel> models;
  for (const std::string &p : paths) models.push_back(LoadModel(p));
  return Vocabulary(std::move(models));
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Speech enhancement, MFCC/GMM word recognition on forward and reversed audio, "
               "and requirement report generation"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--config", common.config_file, "Config file (section.key = value lines)");
  app.add_option("--set", common.settings, "Override one config key, KEY=VALUE (repeatable)");
  app.add_option("--seed", common.seed, "Seed for all randomness");
  app.add_flag("-v,--verbose", common.verbose, "Print the effective configuration to stderr");

  // Per-subcommand flag storage.
  std::string in_path, out_path, noise_out, method, format = "json", label, direction = "forward";
  std::string lexicon_path, md_out, json_out, timestamp = "unspecified", report_out;
  std::vector<std::string> inputs, models;
  std::optional<int> mixtures, max_iter;
  std::optional<double> tol;

  auto *enhance = app.add_subcommand("enhance", "Remove additive noise from a WAV file");
  enhance->add_option("--in", in_path, "Input WAV")->required();
  enhance->add_option("--out", out_path, "Output WAV")->required();
  enhance->add_option("--method", method, "spectral_subtraction or wiener")
      ->check(CLI::IsMember({"spectral_subtraction", "wiener"}));
  enhance->add_option("--noise-out", noise_out, "Write the estimated noise profile (JSON)");

  auto *reverse = app.add_subcommand("reverse", "Time-reverse a WAV file");
  reverse->add_option("--in", in_path, "Input WAV")->required();
  reverse->add_option("--out", out_path, "Output WAV")->required();

  auto *features = app.add_subcommand("features", "Extract the MFCC + delta + delta-delta matrix");
  features->add_option("--in", in_path, "Input WAV")->required();
  features->add_option("--out", out_path, "Output file (default stdout)");
  features->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto *train = app.add_subcommand("train", "Fit a word model from example recordings");
  train->add_option("--label", label, "Word label")->required();
  train->add_option("--in", inputs, "Training WAV (repeatable)")->required();
  train->add_option("--out", out_path, "Model file")->required();
  train->add_option("--mixtures", mixtures, "Number of mixture components");
  train->add_option("--max-iter", max_iter, "EM iteration cap");
  train->add_option("--tol", tol, "Relative log-likelihood convergence tolerance");
  train->add_option("--report", report_out, "Write the training report (JSON)");

  auto *recognize = app.add_subcommand("recognize", "Transcribe a recording with word models");
  recognize->add_option("--in", in_path, "Input WAV")->required();
  recognize->add_option("--model", models, "Word model file (repeatable, at least two)")->required();
  recognize->add_option("--direction", direction, "forward or reverse")
      ->check(CLI::IsMember({"forward", "reverse"}));
  recognize->add_option("--out", out_path, "Output file (default stdout)");

  auto *analyze = app.add_subcommand("analyze", "Forward and reverse recognition plus SRS report");
  analyze->add_option("--in", in_path, "Input WAV")->required();
  analyze->add_option("--model", models, "Word model file (repeatable, at least two)")->required();
  analyze->add_option("--lexicon", lexicon_path, "Synonym/antonym lexicon (CSV triples)");
  analyze->add_option("--out-md", md_out, "Markdown report path");
  analyze->add_option("--out-json", json_out, "Structured report path");
  analyze->add_option("--timestamp", timestamp, "Timestamp recorded in the report header");

  std::vector<std::string> argv_storage(args.begin(), args.end());
  if (argv_storage.empty()) argv_storage.push_back("revspeech");
  std::vector<char *> argv;
  for (std::string &a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kExitUsage;
  }

  try {
    ToolConfig cfg = ResolveConfig(common);
    if (!method.empty()) cfg.recognizer.enhance.method = ParseEnhanceMethod(method);
    if (mixtures) cfg.gmm_num_components = *mixtures;
    if (max_iter) cfg.gmm_max_iter = *max_iter;
    if (tol) cfg.gmm_tol = *tol;
    if (!lexicon_path.empty()) cfg.report_lexicon = lexicon_path;
    Validate(cfg);
    PrintEffective(cfg, common, err);

    if (enhance->parsed()) {
      const AudioBuffer buf = ReadWav(in_path);
      const EnhanceConfig &ecfg = cfg.recognizer.enhance;
      const NoiseProfile noise = EstimateNoise(buf, ecfg);
      const AudioBuffer cleaned = ecfg.method == EnhanceMethod::kWiener
                                      ? WienerFilter(buf, noise, ecfg)
                                      : SpectralSubtract(buf, noise, ecfg);
      WriteWav(cleaned, out_path);
      if (!noise_out.empty()) WriteText(noise_out, NoiseProfileToJson(noise), out);
    } else if (reverse->parsed()) {
      WriteWav(Reverse(ReadWav(in_path)), out_path);
    } else if (features->parsed()) {
      const AudioBuffer buf = ReadWav(in_path);
      const FeatureMatrix fm = Extract(buf, cfg.recognizer.features);
      WriteText(out_path,
                format == "csv" ? FeaturesToCsv(fm, cfg.recognizer.features.num_ceps)
                                : FeaturesToJson(fm, buf.sample_rate_hz),
                out);
    } else if (train->parsed()) {
      FeatureMatrix pooled;
      std::vector<FeatureMatrix> parts;
      Eigen::Index total = 0;
      for (const std::string &path : inputs) {
        for (FeatureMatrix &fm : UtteranceFeatures(ReadWav(path), cfg.recognizer)) {
          if (!parts.empty() && fm.fingerprint != parts.front().fingerprint)
            throw BindingError("training recordings use different sample rates");
          total += fm.num_frames();
          parts.push_back(std::move(fm));
        }
      }
      if (total == 0) throw InsufficientDataError("training recordings contain no frames");
      pooled.fingerprint = parts.front().fingerprint;
      pooled.rows.resize(total, parts.front().dim());
      Eigen::Index row = 0;
      for (const FeatureMatrix &fm : parts) {
        pooled.rows.middleRows(row, fm.num_frames()) = fm.rows;
        row += fm.num_frames();
      }
      const TrainingResult result = Train(pooled, label, cfg.training_options());
      SaveModel(result.model, out_path);
      if (!report_out.empty()) {
        nlohmann::ordered_json rep;
        rep["label"] = label;
        rep["iterations"] = result.report.iterations;
        rep["converged"] = result.report.converged;
        rep["seed"] = result.report.seed;
        rep["log_likelihood_trace"] = result.report.log_likelihood_trace;
        WriteText(report_out, rep.dump(2) + "\n", out);
      }
    } else if (recognize->parsed()) {
      const Vocabulary vocab = LoadVocabulary(models);
      const Transcript t =
          Transcribe(ReadWav(in_path), vocab, ParseDirection(direction), cfg.recognizer);
      WriteText(out_path, TranscriptToJson(t), out);
    } else if (analyze->parsed()) {
      const Vocabulary vocab = LoadVocabulary(models);
      const AudioBuffer buf = ReadWav(in_path);
      const Transcript fwd = Transcribe(buf, vocab, Direction::kForward, cfg.recognizer);
      const Transcript rev = Transcribe(buf, vocab, Direction::kReverse, cfg.recognizer);
      const Lexicon lexicon =
          cfg.report_lexicon.empty() ? DefaultLexicon() : LoadLexicon(cfg.report_lexicon);
      ReportMeta meta;
      meta.source_file = std::filesystem::path(in_path).filename().string();
      meta.timestamp = timestamp;
      meta.tool_config_fingerprint = ConfigFingerprint(cfg);
      const SrsReport report = BuildReport(fwd, rev, lexicon, meta);
      if (md_out.empty() && json_out.empty()) {
        out << Render(report, ReportFormat::kMarkdown);
      } else {
        if (!md_out.empty()) WriteText(md_out, Render(report, ReportFormat::kMarkdown), out);
        if (!json_out.empty()) WriteText(json_out, Render(report, ReportFormat::kStructured), out);
      }
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace revspeech
