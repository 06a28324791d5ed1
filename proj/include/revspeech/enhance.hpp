// revspeech/enhance.hpp

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

// Single-channel noise reduction over a Hamming-windowed STFT: magnitude
// spectral subtraction with a spectral floor, or a decision-directed Wiener
// gain. The noisy phase is reused and frames are recombined by weighted
// overlap-add.

#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "revspeech/audio.hpp"

namespace revspeech {

enum class EnhanceMethod { kSpectralSubtraction, kWiener };

std::string ToString(EnhanceMethod method);
EnhanceMethod ParseEnhanceMethod(const std::string &name);

struct EnhanceConfig {
  EnhanceMethod method = EnhanceMethod::kSpectralSubtraction;
  double alpha = 2.0;  // oversubtraction factor
  double beta = 0.01;  // spectral floor, as a fraction of |Y(k)|
  int fft_size = 0;    // 0: next power of two >= frame length
  double frame_ms = 25.0;
  double overlap_fraction = 0.5;
  double vad_energy_ratio = 1.5;

  bool operator==(const EnhanceConfig &) const = default;
};

void Validate(const EnhanceConfig &cfg);

constexpr double kAnalysisWindowA = 0.46;
constexpr double kDecisionDirectedSmoothing = 0.98;
constexpr double kWienerPrioriFloor = 0.003;
constexpr double kSnrCap = 1e6;
constexpr double kSynthesisFloor = 1e-8;

struct NoiseProfile {
  Eigen::VectorXd mean_magnitude;  // one entry per FFT bin
  int frames_used = 0;

  Eigen::Index fft_size() const { return mean_magnitude.size(); }
};

/// Structured-text export of a profile (JSON object).
std::string NoiseProfileToJson(const NoiseProfile &profile);
NoiseProfile NoiseProfileFromJson(const std::string &text);

/// Frame layout used by both enhancement methods.
struct StftLayout {
  Eigen::Index frame_len = 0;
  Eigen::Index hop = 0;
  Eigen::Index fft_size = 0;
};

StftLayout ResolveLayout(const EnhanceConfig &cfg, int sample_rate_hz);

/// Sum of squared samples per frame.
Eigen::VectorXd FrameEnergies(const FrameSequence &frames);

/// Nearest-rank lower percentile: sorted[floor(q * (n - 1))].
double Percentile(const Eigen::VectorXd &values, double q);

/// Per-bin mean DFT magnitude over the quietest frames: those with energy
/// below vad_energy_ratio times the 10th-percentile frame energy, or the
/// single quietest frame when none qualifies.
NoiseProfile EstimateNoise(const AudioBuffer &buf, const EnhanceConfig &cfg);

/// Returns the enhanced magnitude spectrum for frame `index` given its full
/// complex spectrum.
using MagnitudeRule =
    std::function<Eigen::VectorXd(Eigen::Index index, const Eigen::VectorXcd &spectrum)>;

/// Analysis, per-frame magnitude replacement with the noisy phase kept, and
/// overlap-add synthesis normalized by the summed squared windows. Output has
/// the input's length.
AudioBuffer ResynthesizeStft(const AudioBuffer &buf, const EnhanceConfig &cfg,
                             const MagnitudeRule &rule);

/// max(|Y(k)| - alpha * noise(k), beta * |Y(k)|) per bin.
Eigen::VectorXd SubtractedMagnitude(const Eigen::VectorXd &noisy_magnitude,
                                    const Eigen::VectorXd &noise_magnitude, double alpha,
                                    double beta);

AudioBuffer SpectralSubtract(const AudioBuffer &buf, const NoiseProfile &noise,
                             const EnhanceConfig &cfg);

AudioBuffer WienerFilter(const AudioBuffer &buf, const NoiseProfile &noise,
                         const EnhanceConfig &cfg);

/// Estimates the noise from `buf` itself and applies cfg.method.
AudioBuffer Enhance(const AudioBuffer &buf, const EnhanceConfig &cfg);

}  // namespace revspeech
