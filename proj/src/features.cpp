// features.cpp

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

#include "revspeech/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revspeech/dsp.hpp"
#include "revspeech/errors.hpp"
#include "revspeech/format.hpp"

namespace revspeech {

void Validate(const FeatureConfig &cfg) {
  if (!(cfg.preemphasis_a >= 0.0 && cfg.preemphasis_a < 1.0))
    throw ConfigError("features.preemphasis_a must lie in [0, 1)");
  if (!(cfg.frame_ms > 0.0)) throw ConfigError("features.frame_ms must be positive");
  if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0))
    throw ConfigError("features.overlap_fraction must lie in [0, 1)");
  if (cfg.fft_size < 0 || (cfg.fft_size > 0 && !dsp::IsPowerOfTwo(cfg.fft_size)))
    throw ConfigError("features.fft_size must be 0 (auto) or a power of two");
  if (cfg.num_filters < 1) throw ConfigError("features.num_filters must be >= 1");
  if (cfg.num_ceps < 1 || cfg.num_ceps > cfg.num_filters)
    throw ConfigError("features.num_ceps must satisfy 0 < num_ceps <= num_filters");
  if (cfg.delta_window < 1) throw ConfigError("features.delta_window must be >= 1");
  if (!(cfg.low_freq_hz >= 0.0)) throw ConfigError("features.low_freq_hz must be >= 0");
}

double ResolveHighFreq(const FeatureConfig &cfg, int sample_rate_hz) {
  const double nyquist = 0.5 * sample_rate_hz;
  const double high = cfg.high_freq_hz > 0.0 ? cfg.high_freq_hz : nyquist;
  if (high > nyquist)
    throw ConfigError("sample rate " + std::to_string(sample_rate_hz) +
                      " Hz is below twice features.high_freq_hz");
  if (!(cfg.low_freq_hz < high))
    throw ConfigError("features.low_freq_hz must be below the upper band edge");
  return high;
}

Eigen::Index ResolveFftSize(const FeatureConfig &cfg, Eigen::Index frame_len) {
  if (cfg.fft_size == 0) return dsp::NextPowerOfTwo(frame_len);
  if (cfg.fft_size < frame_len)
    throw ConfigError("features.fft_size is shorter than the frame");
  return cfg.fft_size;
}

std::string FeatureFingerprint(const FeatureConfig &cfg, int sample_rate_hz) {
  std::string canon = "features-v1";
  canon += ";preemphasis_a=" + FormatDouble(cfg.preemphasis_a);
  canon += ";frame_ms=" + FormatDouble(cfg.frame_ms);
  canon += ";overlap_fraction=" + FormatDouble(cfg.overlap_fraction);
  canon += ";window_a=" + FormatDouble(cfg.window_a);
  canon += ";fft_size=" + std::to_string(cfg.fft_size);
  canon += ";num_filters=" + std::to_string(cfg.num_filters);
  canon += ";num_ceps=" + std::to_string(cfg.num_ceps);
  canon += ";delta_window=" + std::to_string(cfg.delta_window);
  canon += ";low_freq_hz=" + FormatDouble(cfg.low_freq_hz);
  canon += ";high_freq_hz=" + FormatDouble(cfg.high_freq_hz);
  canon += ";sample_rate_hz=" + std::to_string(sample_rate_hz);
  return Fnv1aHex(canon);
}

AudioBuffer Preemphasize(const AudioBuffer &buf, double a) {
  AudioBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples = dsp::Preemphasize(buf.samples, a);
  return out;
}

Eigen::VectorXd ApplyHammingWindow(const Eigen::VectorXd &frame, double a) {
  return frame.cwiseProduct(dsp::HammingWindow(frame.size(), a));
}

Eigen::VectorXd DftMagnitude(const Eigen::VectorXd &frame, Eigen::Index fft_size) {
  return dsp::DftMagnitude(frame, fft_size);
}

double HzToMel(double hz) { return dsp::HzToMel(hz); }
double MelToHz(double mel) { return dsp::MelToHz(mel); }

Eigen::MatrixXd MelFilterbankWeights(const FeatureConfig &cfg, int sample_rate_hz,
                                     Eigen::Index fft_size) {
  if (cfg.num_filters < 1) throw ConfigError("features.num_filters must be >= 1");
  if (fft_size < 2) throw ConfigError("fft_size must be >= 2");
  const double high = ResolveHighFreq(cfg, sample_rate_hz);
  const int num_filters = cfg.num_filters;
  const double mel_low = HzToMel(cfg.low_freq_hz);
  const double mel_high = HzToMel(high);
  Eigen::VectorXd edges_hz(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i)
    edges_hz(i) = MelToHz(mel_low + (mel_high - mel_low) * i / (num_filters + 1));

  const Eigen::Index num_bins = fft_size / 2 + 1;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(num_filters, num_bins);
  for (int m = 0; m < num_filters; ++m) {
    const double left = edges_hz(m), center = edges_hz(m + 1), right = edges_hz(m + 2);
    for (Eigen::Index k = 0; k < num_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(fft_size);
      if (f > left && f <= center)
        w(m, k) = (f - left) / (center - left);
      else if (f > center && f < right)
        w(m, k) = (right - f) / (right - center);
    }
  }
  return w;
}

Eigen::VectorXd MelFilterbank(const Eigen::VectorXd &magnitudes, const FeatureConfig &cfg,
                              int sample_rate_hz, Eigen::Index fft_size) {
  const Eigen::Index num_bins = fft_size / 2 + 1;
  if (magnitudes.size() < num_bins)
    throw ConfigError("spectrum has fewer bins than the filterbank needs");
  const Eigen::MatrixXd w = MelFilterbankWeights(cfg, sample_rate_hz, fft_size);
  return w * magnitudes.head(num_bins).cwiseAbs2();
}

Eigen::MatrixXd DctBasis(int num_ceps, int num_filters) {
  Eigen::MatrixXd basis(num_ceps, num_filters);
  for (int n = 0; n < num_ceps; ++n)
    for (int m = 0; m < num_filters; ++m)
      basis(n, m) = std::cos(std::numbers::pi * n * (m + 0.5) / num_filters);
  return basis;
}

Eigen::VectorXd Mfcc(const Eigen::VectorXd &energies, int num_ceps) {
  if (num_ceps < 1 || num_ceps > energies.size())
    throw ConfigError("num_ceps must satisfy 0 < num_ceps <= number of filters");
  if ((energies.array() < 0.0).any()) throw ContractError("Mfcc: negative filterbank energy");
  const Eigen::VectorXd log_energy =
      energies.array().max(kLogEnergyFloor).log10().matrix();
  return DctBasis(num_ceps, static_cast<int>(energies.size())) * log_energy;
}

Eigen::MatrixXd DeltaFeatures(const Eigen::MatrixXd &ceps, int window) {
  if (window < 1) throw ConfigError("delta window must be >= 1");
  const Eigen::Index frames = ceps.rows();
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(frames, ceps.cols());
  if (frames == 0) return delta;
  double denom = 0.0;
  for (int i = 1; i <= window; ++i) denom += 2.0 * i * i;
  for (Eigen::Index n = 0; n < frames; ++n) {
    for (int i = 1; i <= window; ++i) {
      const Eigen::Index ahead = std::min<Eigen::Index>(n + i, frames - 1);
      const Eigen::Index behind = std::max<Eigen::Index>(n - i, 0);
      delta.row(n) += i * (ceps.row(ahead) - ceps.row(behind));
    }
  }
  return delta / denom;
}

Eigen::MatrixXd Cepstra(const AudioBuffer &buf, const FeatureConfig &cfg) {
  Validate(cfg);
  ResolveHighFreq(cfg, buf.sample_rate_hz);  // rejects rates below 2 * high_freq_hz
  const AudioBuffer emphasized = Preemphasize(buf, cfg.preemphasis_a);
  const FrameSequence seq = Segment(emphasized, cfg.frame_ms, cfg.overlap_fraction);
  const Eigen::Index fft_size = ResolveFftSize(cfg, seq.frame_len);
  const Eigen::VectorXd window = dsp::HammingWindow(seq.frame_len, cfg.window_a);
  const Eigen::MatrixXd fbank = MelFilterbankWeights(cfg, buf.sample_rate_hz, fft_size);
  const Eigen::MatrixXd dct = DctBasis(cfg.num_ceps, cfg.num_filters);
  const Eigen::Index num_bins = fft_size / 2 + 1;

  Eigen::MatrixXd ceps(seq.num_frames(), cfg.num_ceps);
  for (Eigen::Index f = 0; f < seq.num_frames(); ++f) {
    const Eigen::VectorXd windowed = seq.frames.col(f).cwiseProduct(window);
    const Eigen::VectorXd mag = dsp::DftMagnitude(windowed, fft_size);
    const Eigen::VectorXd energies = fbank * mag.head(num_bins).cwiseAbs2();
    const Eigen::VectorXd log_energy =
        energies.array().max(kLogEnergyFloor).log10().matrix();
    ceps.row(f) = (dct * log_energy).transpose();
  }
  return ceps;
}

FeatureMatrix Extract(const AudioBuffer &buf, const FeatureConfig &cfg) {
  const Eigen::MatrixXd ceps = Cepstra(buf, cfg);
  const Eigen::MatrixXd delta = DeltaFeatures(ceps, cfg.delta_window);
  const Eigen::MatrixXd delta2 = DeltaFeatures(delta, cfg.delta_window);
  FeatureMatrix out;
  out.rows.resize(ceps.rows(), 3 * cfg.num_ceps);
  out.rows << ceps, delta, delta2;
  out.fingerprint = FeatureFingerprint(cfg, buf.sample_rate_hz);
  return out;
}

}  // namespace revspeech
