// revspeech/config.hpp

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "revspeech/gmm.hpp"
#include "revspeech/recognizer.hpp"

namespace revspeech {

/// Every tunable of the command-line tool. Serialized as flat
/// "section.key = value" lines.
struct ToolConfig {
  std::uint64_t seed = 0;
  RecognizerConfig recognizer;
  int gmm_num_components = 4;
  int gmm_max_iter = 200;
  double gmm_tol = 1e-5;
  std::string report_lexicon;  // empty: built-in lexicon

  bool operator==(const ToolConfig &) const = default;

  TrainingOptions training_options() const {
    return {gmm_num_components, seed, gmm_max_iter, gmm_tol};
  }
};

/// Keys accepted by ParseConfig / ApplySetting, in output order.
std::vector<std::string> ConfigKeys();

/// Applies one "key = value" assignment; throws ConfigError on unknown keys
/// or unparsable values.
void ApplySetting(ToolConfig &cfg, const std::string &key, const std::string &value);

/// Overlays the assignments in `text` onto `cfg`.
void ParseConfigInto(ToolConfig &cfg, const std::string &text);
ToolConfig ParseConfig(const std::string &text);
void LoadConfigInto(ToolConfig &cfg, const std::filesystem::path &path);

/// Every key with its effective value; ParseConfig inverts it exactly.
std::string FormatConfig(const ToolConfig &cfg);

void Validate(const ToolConfig &cfg);

std::string ConfigFingerprint(const ToolConfig &cfg);

}  // namespace revspeech
