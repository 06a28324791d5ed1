// revspeech/audio.hpp

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

#include <filesystem>
#include <string>

#include <Eigen/Core>

namespace revspeech {

/// Mono signal with samples in [-1, 1].
struct AudioBuffer {
  Eigen::VectorXd samples;
  int sample_rate_hz = 0;

  Eigen::Index size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
  bool operator==(const AudioBuffer &other) const {
    return sample_rate_hz == other.sample_rate_hz &&
           samples.size() == other.samples.size() && samples == other.samples;
  }
};

/// Fixed-length frames stored one per column. Frame i starts at sample i * hop
/// of the source; the last frame is zero-padded past the end of the source.
struct FrameSequence {
  Eigen::MatrixXd frames;  // frame_len x num_frames
  Eigen::Index frame_len = 0;
  Eigen::Index hop = 0;
  int sample_rate_hz = 0;

  Eigen::Index num_frames() const { return frames.cols(); }
};

/// Reads RIFF/WAVE PCM 16-bit, one or two channels. Stereo is averaged.
AudioBuffer ReadWav(const std::filesystem::path &path);

/// Parses WAV bytes already in memory; ReadWav is a thin wrapper.
AudioBuffer ParseWav(const std::string &bytes);

/// Writes PCM 16-bit mono. Samples are scaled by 32768, rounded half away from
/// zero and clamped to [-32768, 32767].
void WriteWav(const AudioBuffer &buf, const std::filesystem::path &path);

std::string EncodeWav(const AudioBuffer &buf);

/// Quantized 16-bit value used by the writer for one sample.
std::int16_t QuantizeSample(double s);

AudioBuffer Reverse(const AudioBuffer &buf);

/// Samples covered by `frame_ms` at `sample_rate_hz`, rounded to nearest.
Eigen::Index FrameLength(double frame_ms, int sample_rate_hz);

/// Hop for a frame of `frame_len` samples with the given overlap fraction.
Eigen::Index FrameHop(Eigen::Index frame_len, double overlap_fraction);

/// Number of frames `Segment` produces for a signal of `num_samples`.
Eigen::Index FrameCount(Eigen::Index num_samples, Eigen::Index frame_len, Eigen::Index hop);

FrameSequence Segment(const AudioBuffer &buf, double frame_ms, double overlap_fraction);

/// Segment with explicit sample counts.
FrameSequence SegmentSamples(const AudioBuffer &buf, Eigen::Index frame_len, Eigen::Index hop);

}  // namespace revspeech
