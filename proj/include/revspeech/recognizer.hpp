// revspeech/recognizer.hpp

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

// Isolated-word recognition: energy endpointing splits a recording into
// utterances and each utterance is scored against every word model by its
// average per-frame log-likelihood.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "revspeech/audio.hpp"
#include "revspeech/enhance.hpp"
#include "revspeech/features.hpp"
#include "revspeech/gmm.hpp"

namespace revspeech {

enum class Direction { kForward, kReverse };

std::string ToString(Direction direction);
Direction ParseDirection(const std::string &name);

struct EndpointConfig {
  double frame_ms = 10.0;
  int smoothing_frames = 5;
  double threshold_ratio = 3.0;  // times the 10th-percentile smoothed energy
  double merge_gap_ms = 200.0;
  double min_utterance_ms = 250.0;

  bool operator==(const EndpointConfig &) const = default;
};

void Validate(const EndpointConfig &cfg);

/// Everything the per-utterance front end needs.
struct RecognizerConfig {
  bool enhance_input = true;
  EnhanceConfig enhance;
  FeatureConfig features;
  EndpointConfig endpoint;

  bool operator==(const RecognizerConfig &) const = default;
};

struct TimeSpan {
  double start_s = 0.0;
  double end_s = 0.0;

  bool operator==(const TimeSpan &) const = default;
};

/// Sample range [begin, end) of one detected utterance.
struct SampleSpan {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;

  bool operator==(const SampleSpan &) const = default;
};

struct SegmentHypothesis {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
  double score = 0.0;   // average per-frame log-likelihood of the winner
  double margin = 0.0;  // winner minus runner-up
  Direction direction = Direction::kForward;

  bool operator==(const SegmentHypothesis &) const = default;
};

/// Segment times are in the timeline of the audio that was recognized; for
/// reverse transcripts that is the reversed recording.
struct Transcript {
  std::vector<SegmentHypothesis> segments;
  Direction direction = Direction::kForward;
  double source_duration_s = 0.0;

  bool operator==(const Transcript &) const = default;
};

/// Word models keyed by label. All models share one dimension and feature
/// fingerprint.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<GmmModel> models);

  const std::map<std::string, GmmModel> &entries() const { return entries_; }
  const std::string &feature_fingerprint() const { return fingerprint_; }
  Eigen::Index dim() const { return dim_; }

 private:
  std::map<std::string, GmmModel> entries_;
  std::string fingerprint_;
  Eigen::Index dim_ = 0;
};

struct Classification {
  std::string label;
  double score = 0.0;
  double margin = 0.0;
};

/// Argmax of average log-likelihood; ties go to the lexicographically smallest
/// label.
Classification ClassifySegment(const FeatureMatrix &features, const Vocabulary &vocab);

std::vector<SampleSpan> SegmentUtteranceSamples(const AudioBuffer &buf, const EndpointConfig &cfg);

/// Energy endpointing with 5-frame median smoothing, gap merging and a
/// minimum length. Falls back to the whole buffer when nothing qualifies.
std::vector<TimeSpan> SegmentUtterances(const AudioBuffer &buf, const EndpointConfig &cfg);

/// Maps a segment of a reverse transcript onto the forward timeline:
/// (duration - end, duration - start).
SegmentHypothesis ToForwardTime(const SegmentHypothesis &segment, double duration_s);

/// Optional enhancement followed by endpointing; one feature matrix per
/// detected utterance.
std::vector<FeatureMatrix> UtteranceFeatures(const AudioBuffer &buf, const RecognizerConfig &cfg);

Transcript Transcribe(const AudioBuffer &buf, const Vocabulary &vocab, Direction direction,
                      const RecognizerConfig &cfg);

/// Structured text for the recognize command: times with 3 decimals, scores
/// with full precision.
std::string TranscriptToJson(const Transcript &transcript);
Transcript TranscriptFromJson(const std::string &text);

}  // namespace revspeech
