// recognizer.cpp

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

#include "revspeech/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "revspeech/errors.hpp"
#include "revspeech/format.hpp"

namespace revspeech {

std::string ToString(Direction direction) {
  return direction == Direction::kForward ? "forward" : "reverse";
}

Direction ParseDirection(const std::string &name) {
  if (name == "forward") return Direction::kForward;
  if (name == "reverse") return Direction::kReverse;
  throw ConfigError("unknown direction '" + name + "'");
}

void Validate(const EndpointConfig &cfg) {
  if (!(cfg.frame_ms > 0.0)) throw ConfigError("recognizer.frame_ms must be positive");
  if (cfg.smoothing_frames < 1) throw ConfigError("recognizer.smoothing_frames must be >= 1");
  if (!(cfg.threshold_ratio > 0.0)) throw ConfigError("recognizer.threshold_ratio must be positive");
  if (!(cfg.merge_gap_ms >= 0.0)) throw ConfigError("recognizer.merge_gap_ms must be >= 0");
  if (!(cfg.min_utterance_ms >= 0.0)) throw ConfigError("recognizer.min_utterance_ms must be >= 0");
}

Vocabulary::Vocabulary(std::vector<GmmModel> models) {
  if (models.size() < 2) throw ContractError("a vocabulary needs at least two word models");
  fingerprint_ = models.front().feature_fingerprint;
  dim_ = models.front().dim();
  for (auto &model : models) {
    ValidateModel(model);
    if (model.feature_fingerprint != fingerprint_)
      throw BindingError("word model '" + model.label + "' was trained on a different front end");
    if (model.dim() != dim_) throw ContractError("word models disagree on feature dimension");
    const std::string label = model.label;
    if (!entries_.emplace(label, std::move(model)).second)
      throw ContractError("duplicate word label '" + label + "'");
  }
}

Classification ClassifySegment(const FeatureMatrix &features, const Vocabulary &vocab) {
  if (features.num_frames() == 0) throw ContractError("cannot classify an empty segment");
  if (features.fingerprint != vocab.feature_fingerprint())
    throw BindingError("features (" + features.fingerprint + ") and vocabulary (" +
                       vocab.feature_fingerprint() + ") use different front ends");
  Classification best;
  double best_score = -std::numeric_limits<double>::infinity();
  double runner_up = -std::numeric_limits<double>::infinity();
  const double frames = static_cast<double>(features.num_frames());
  // std::map iterates in label order, so strict '>' keeps the smallest label on ties.
  for (const auto &[label, model] : vocab.entries()) {
    const double score = LogLikelihood(model, features) / frames;
    if (score > best_score) {
      runner_up = best_score;
      best_score = score;
      best.label = label;
    } else if (score > runner_up) {
      runner_up = score;
    }
  }
  best.score = best_score;
  best.margin = best_score - runner_up;
  return best;
}

namespace {

double MedianOf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

}  // namespace

std::vector<SampleSpan> SegmentUtteranceSamples(const AudioBuffer &buf, const EndpointConfig &cfg) {
  Validate(cfg);
  const Eigen::Index n = buf.size();
  if (n == 0) return {};
  const Eigen::Index frame_len = FrameLength(cfg.frame_ms, buf.sample_rate_hz);
  const FrameSequence seq = SegmentSamples(buf, frame_len, frame_len);
  const Eigen::VectorXd energy = FrameEnergies(seq);
  const Eigen::Index count = energy.size();

  const Eigen::Index half = cfg.smoothing_frames / 2;
  Eigen::VectorXd smoothed(count);
  for (Eigen::Index f = 0; f < count; ++f) {
    const Eigen::Index lo = std::max<Eigen::Index>(f - half, 0);
    const Eigen::Index hi = std::min<Eigen::Index>(f + (cfg.smoothing_frames - 1 - half), count - 1);
    smoothed(f) = MedianOf(std::vector<double>(energy.data() + lo, energy.data() + hi + 1));
  }
  const double threshold = cfg.threshold_ratio * Percentile(smoothed, 0.10);

  std::vector<SampleSpan> regions;
  for (Eigen::Index f = 0; f < count;) {
    if (!(smoothed(f) > threshold)) {
      ++f;
      continue;
    }
    Eigen::Index g = f;
    while (g + 1 < count && smoothed(g + 1) > threshold) ++g;
    regions.push_back({f * frame_len, std::min<Eigen::Index>((g + 1) * frame_len, n)});
    f = g + 1;
  }

  const double rate = buf.sample_rate_hz;
  std::vector<SampleSpan> merged;
  for (const SampleSpan &r : regions) {
    if (!merged.empty() && (r.begin - merged.back().end) / rate * 1000.0 < cfg.merge_gap_ms)
      merged.back().end = r.end;
    else
      merged.push_back(r);
  }
  std::vector<SampleSpan> kept;
  for (const SampleSpan &r : merged)
    if ((r.end - r.begin) / rate * 1000.0 >= cfg.min_utterance_ms) kept.push_back(r);
  if (kept.empty()) kept.push_back({0, n});
  return kept;
}

std::vector<TimeSpan> SegmentUtterances(const AudioBuffer &buf, const EndpointConfig &cfg) {
  std::vector<TimeSpan> spans;
  const double rate = buf.sample_rate_hz;
  for (const SampleSpan &s : SegmentUtteranceSamples(buf, cfg))
    spans.push_back({s.begin / rate, s.end / rate});
  return spans;
}

SegmentHypothesis ToForwardTime(const SegmentHypothesis &segment, double duration_s) {
  SegmentHypothesis out = segment;
  out.start_s = duration_s - segment.end_s;
  out.end_s = duration_s - segment.start_s;
  return out;
}

namespace {

AudioBuffer Slice(const AudioBuffer &buf, const SampleSpan &span) {
  AudioBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples = buf.samples.segment(span.begin, span.end - span.begin);
  return out;
}

AudioBuffer FrontEnd(const AudioBuffer &buf, const RecognizerConfig &cfg) {
  if (buf.size() == 0) throw ContractError("cannot recognize an empty recording");
  return cfg.enhance_input ? Enhance(buf, cfg.enhance) : buf;
}

}  // namespace

std::vector<FeatureMatrix> UtteranceFeatures(const AudioBuffer &buf, const RecognizerConfig &cfg) {
  const AudioBuffer audio = FrontEnd(buf, cfg);
  std::vector<FeatureMatrix> out;
  for (const SampleSpan &span : SegmentUtteranceSamples(audio, cfg.endpoint))
    out.push_back(Extract(Slice(audio, span), cfg.features));
  return out;
}

Transcript Transcribe(const AudioBuffer &buf, const Vocabulary &vocab, Direction direction,
                      const RecognizerConfig &cfg) {
  const AudioBuffer audio = FrontEnd(direction == Direction::kReverse ? Reverse(buf) : buf, cfg);
  Transcript transcript;
  transcript.direction = direction;
  transcript.source_duration_s = audio.duration_s();
  const double rate = audio.sample_rate_hz;
  for (const SampleSpan &span : SegmentUtteranceSamples(audio, cfg.endpoint)) {
    const Classification c = ClassifySegment(Extract(Slice(audio, span), cfg.features), vocab);
    SegmentHypothesis seg;
    seg.start_s = span.begin / rate;
    seg.end_s = span.end / rate;
    seg.label = c.label;
    seg.score = c.score;
    seg.margin = c.margin;
    seg.direction = direction;
    transcript.segments.push_back(std::move(seg));
  }
  return transcript;
}

namespace {

std::string Seconds3(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

}  // namespace

std::string TranscriptToJson(const Transcript &transcript) {
  std::string out = "{\n";
  out += "  \"direction\": \"" + ToString(transcript.direction) + "\",\n";
  out += "  \"source_duration_s\": " + Seconds3(transcript.source_duration_s) + ",\n";
  out += "  \"segments\": [";
  for (std::size_t i = 0; i < transcript.segments.size(); ++i) {
    const SegmentHypothesis &s = transcript.segments[i];
    out += i ? ",\n" : "\n";
    out += "    {\"start_s\": " + Seconds3(s.start_s) + ", \"end_s\": " + Seconds3(s.end_s) +
           ", \"label\": " + nlohmann::json(s.label).dump() +
           ", \"score\": " + FormatDouble(s.score) + ", \"margin\": " + FormatDouble(s.margin) +
           ", \"direction\": \"" + ToString(s.direction) + "\"}";
  }
  out += transcript.segments.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

Transcript TranscriptFromJson(const std::string &text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Transcript t;
    t.direction = ParseDirection(doc.at("direction").get<std::string>());
    t.source_duration_s = doc.at("source_duration_s").get<double>();
    for (const auto &s : doc.at("segments")) {
      SegmentHypothesis seg;
      seg.start_s = s.at("start_s").get<double>();
      seg.end_s = s.at("end_s").get<double>();
      seg.label = s.at("label").get<std::string>();
      seg.score = s.at("score").get<double>();
      seg.margin = s.at("margin").get<double>();
      seg.direction = ParseDirection(s.at("direction").get<std::string>());
      t.segments.push_back(std::move(seg));
    }
    return t;
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed transcript: ") + e.what());
  }
}

}  // namespace revspeech
