// config.cpp

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

#include "revspeech/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "revspeech/errors.hpp"
#include "revspeech/format.hpp"

namespace revspeech {

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
std::string Show(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *first = value.data();
  const char *last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected true/false)");
}

struct Field {
  std::string key;
  std::function<std::string(const ToolConfig &)> get;
  std::function<void(ToolConfig &, const std::string &, const std::string &)> set;
};

template <typename Member>
Field MakeReal(std::string key, Member member) {
  return {key, [member](const ToolConfig &c) { return Show(member(c)); },
          [member](ToolConfig &c, const std::string &k, const std::string &v) {
            member(c) = ParseNumber<double>(k, v);
          }};
}

template <typename Int, typename Member>
Field MakeInt(std::string key, Member member) {
  return {key,
          [member](const ToolConfig &c) {
            return std::to_string(member(c));
          },
          [member](ToolConfig &c, const std::string &k, const std::string &v) {
            member(c) = ParseNumber<Int>(k, v);
          }};
}

const std::vector<Field> &Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(MakeInt<std::uint64_t>("seed", [](auto &c) -> auto & { return c.seed; }));

    f.push_back({"enhance.method",
                 [](const ToolConfig &c) { return ToString(c.recognizer.enhance.method); },
                 [](ToolConfig &c, const std::string &, const std::string &v) {
                   c.recognizer.enhance.method = ParseEnhanceMethod(v);
                 }});
    f.push_back(MakeReal("enhance.alpha", [](auto &c) -> auto & { return c.recognizer.enhance.alpha; }));
    f.push_back(MakeReal("enhance.beta", [](auto &c) -> auto & { return c.recognizer.enhance.beta; }));
    f.push_back(MakeInt<int>("enhance.fft_size", [](auto &c) -> auto & { return c.recognizer.enhance.fft_size; }));
    f.push_back(MakeReal("enhance.frame_ms", [](auto &c) -> auto & { return c.recognizer.enhance.frame_ms; }));
    f.push_back(MakeReal("enhance.overlap_fraction",
                         [](auto &c) -> auto & { return c.recognizer.enhance.overlap_fraction; }));
    f.push_back(MakeReal("enhance.vad_energy_ratio",
                         [](auto &c) -> auto & { return c.recognizer.enhance.vad_energy_ratio; }));

    f.push_back(MakeReal("features.preemphasis_a",
                         [](auto &c) -> auto & { return c.recognizer.features.preemphasis_a; }));
    f.push_back(MakeReal("features.frame_ms", [](auto &c) -> auto & { return c.recognizer.features.frame_ms; }));
    f.push_back(MakeReal("features.overlap_fraction",
                         [](auto &c) -> auto & { return c.recognizer.features.overlap_fraction; }));
    f.push_back(MakeReal("features.window_a", [](auto &c) -> auto & { return c.recognizer.features.window_a; }));
    f.push_back(MakeInt<int>("features.fft_size", [](auto &c) -> auto & { return c.recognizer.features.fft_size; }));
    f.push_back(MakeInt<int>("features.num_filters",
                             [](auto &c) -> auto & { return c.recognizer.features.num_filters; }));
    f.push_back(MakeInt<int>("features.num_ceps", [](auto &c) -> auto & { return c.recognizer.features.num_ceps; }));
    f.push_back(MakeInt<int>("features.delta_window",
                             [](auto &c) -> auto & { return c.recognizer.features.delta_window; }));
    f.push_back(MakeReal("features.low_freq_hz",
                         [](auto &c) -> auto & { return c.recognizer.features.low_freq_hz; }));
    f.push_back(MakeReal("features.high_freq_hz",
                         [](auto &c) -> auto & { return c.recognizer.features.high_freq_hz; }));

    f.push_back({"recognizer.enhance_input",
                 [](const ToolConfig &c) { return std::string(c.recognizer.enhance_input ? "true" : "false"); },
                 [](ToolConfig &c, const std::string &k, const std::string &v) {
                   c.recognizer.enhance_input = ParseBool(k, v);
                 }});
    f.push_back(MakeReal("recognizer.frame_ms", [](auto &c) -> auto & { return c.recognizer.endpoint.frame_ms; }));
    f.push_back(MakeInt<int>("recognizer.smoothing_frames",
                             [](auto &c) -> auto & { return c.recognizer.endpoint.smoothing_frames; }));
    f.push_back(MakeReal("recognizer.threshold_ratio",
                         [](auto &c) -> auto & { return c.recognizer.endpoint.threshold_ratio; }));
    f.push_back(MakeReal("recognizer.merge_gap_ms",
                         [](auto &c) -> auto & { return c.recognizer.endpoint.merge_gap_ms; }));
    f.push_back(MakeReal("recognizer.min_utterance_ms",
                         [](auto &c) -> auto & { return c.recognizer.endpoint.min_utterance_ms; }));

    f.push_back(MakeInt<int>("gmm.num_components", [](auto &c) -> auto & { return c.gmm_num_components; }));
    f.push_back(MakeInt<int>("gmm.max_iter", [](auto &c) -> auto & { return c.gmm_max_iter; }));
    f.push_back(MakeReal("gmm.tol", [](auto &c) -> auto & { return c.gmm_tol; }));

    f.push_back({"report.lexicon", [](const ToolConfig &c) { return c.report_lexicon; },
                 [](ToolConfig &c, const std::string &, const std::string &v) { c.report_lexicon = v; }});
    return f;
  }();
  return fields;
}

}  // namespace

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Field &f : Fields()) keys.push_back(f.key);
  return keys;
}

void ApplySetting(ToolConfig &cfg, const std::string &key, const std::string &value) {
  for (const Field &f : Fields()) {
    if (f.key == key) {
      f.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void ParseConfigInto(ToolConfig &cfg, const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    ApplySetting(cfg, Trim(trimmed.substr(0, eq)), Trim(trimmed.substr(eq + 1)));
  }
}

ToolConfig ParseConfig(const std::string &text) {
  ToolConfig cfg;
  ParseConfigInto(cfg, text);
  return cfg;
}

void LoadConfigInto(ToolConfig &cfg, const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  ParseConfigInto(cfg, std::string((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>()));
}

std::string FormatConfig(const ToolConfig &cfg) {
  std::string out;
  for (const Field &f : Fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

void Validate(const ToolConfig &cfg) {
  Validate(cfg.recognizer.enhance);
  Validate(cfg.recognizer.features);
  Validate(cfg.recognizer.endpoint);
  if (cfg.gmm_num_components < 1) throw ConfigError("gmm.num_components must be >= 1");
  if (cfg.gmm_max_iter < 1) throw ConfigError("gmm.max_iter must be >= 1");
  if (!(cfg.gmm_tol >= 0.0)) throw ConfigError("gmm.tol must be >= 0");
}

std::string ConfigFingerprint(const ToolConfig &cfg) { return Fnv1aHex(FormatConfig(cfg)); }

}  // namespace revspeech
