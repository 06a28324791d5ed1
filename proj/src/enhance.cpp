// enhance.cpp

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

#include "revspeech/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "revspeech/dsp.hpp"
#include "revspeech/errors.hpp"

namespace revspeech {

std::string ToString(EnhanceMethod method) {
  switch (method) {
    case EnhanceMethod::kSpectralSubtraction:
      return "spectral_subtraction";
    case EnhanceMethod::kWiener:
      return "wiener";
  }
  return "unknown";
}

EnhanceMethod ParseEnhanceMethod(const std::string &name) {
  if (name == "spectral_subtraction") return EnhanceMethod::kSpectralSubtraction;
  if (name == "wiener") return EnhanceMethod::kWiener;
  throw ConfigError("unknown enhancement method '" + name + "'");
}

void Validate(const EnhanceConfig &cfg) {
  if (!(cfg.alpha >= 1.0)) throw ConfigError("enhance.alpha must be >= 1");
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) throw ConfigError("enhance.beta must lie in [0, 1)");
  if (cfg.fft_size < 0 || (cfg.fft_size > 0 && !dsp::IsPowerOfTwo(cfg.fft_size)))
    throw ConfigError("enhance.fft_size must be 0 (auto) or a power of two");
  if (!(cfg.frame_ms > 0.0)) throw ConfigError("enhance.frame_ms must be positive");
  if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0))
    throw ConfigError("enhance.overlap_fraction must lie in [0, 1)");
  if (!(cfg.vad_energy_ratio > 1.0)) throw ConfigError("enhance.vad_energy_ratio must be > 1");
}

std::string NoiseProfileToJson(const NoiseProfile &profile) {
  nlohmann::json doc;
  doc["fft_size"] = profile.fft_size();
  doc["frames_used"] = profile.frames_used;
  doc["mean_magnitude"] = std::vector<double>(profile.mean_magnitude.begin(),
                                              profile.mean_magnitude.end());
  return doc.dump(2) + "\n";
}

NoiseProfile NoiseProfileFromJson(const std::string &text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto mags = doc.at("mean_magnitude").get<std::vector<double>>();
    NoiseProfile p;
    p.frames_used = doc.at("frames_used").get<int>();
    p.mean_magnitude = Eigen::Map<const Eigen::VectorXd>(mags.data(),
                                                         static_cast<Eigen::Index>(mags.size()));
    if (doc.at("fft_size").get<Eigen::Index>() != p.fft_size())
      throw FormatError("noise profile: fft_size does not match magnitude count");
    if (p.frames_used < 1 || (p.mean_magnitude.array() < 0.0).any())
      throw FormatError("noise profile: invalid magnitudes or frame count");
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("noise profile: ") + e.what());
  }
}

StftLayout ResolveLayout(const EnhanceConfig &cfg, int sample_rate_hz) {
  Validate(cfg);
  StftLayout layout;
  layout.frame_len = FrameLength(cfg.frame_ms, sample_rate_hz);
  layout.hop = FrameHop(layout.frame_len, cfg.overlap_fraction);
  if (cfg.fft_size == 0) {
    layout.fft_size = dsp::NextPowerOfTwo(layout.frame_len);
  } else {
    if (cfg.fft_size < layout.frame_len) throw ConfigError("enhance.fft_size is shorter than the frame");
    layout.fft_size = cfg.fft_size;
  }
  return layout;
}

Eigen::VectorXd FrameEnergies(const FrameSequence &frames) {
  return frames.frames.colwise().squaredNorm().transpose();
}

double Percentile(const Eigen::VectorXd &values, double q) {
  if (values.size() == 0) throw ContractError("Percentile: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[idx];
}

NoiseProfile EstimateNoise(const AudioBuffer &buf, const EnhanceConfig &cfg) {
  if (buf.size() == 0) throw ContractError("EstimateNoise: empty buffer");
  const StftLayout layout = ResolveLayout(cfg, buf.sample_rate_hz);
  const FrameSequence seq = SegmentSamples(buf, layout.frame_len, layout.hop);
  const Eigen::VectorXd energy = FrameEnergies(seq);
  const double threshold = cfg.vad_energy_ratio * Percentile(energy, 0.10);

  std::vector<Eigen::Index> selected;
  for (Eigen::Index f = 0; f < energy.size(); ++f)
    if (energy(f) < threshold) selected.push_back(f);
  if (selected.empty()) {
    Eigen::Index quietest = 0;
    energy.minCoeff(&quietest);
    selected.push_back(quietest);
  }

  const Eigen::VectorXd window = dsp::HammingWindow(layout.frame_len, kAnalysisWindowA);
  NoiseProfile profile;
  profile.mean_magnitude = Eigen::VectorXd::Zero(layout.fft_size);
  for (Eigen::Index f : selected)
    profile.mean_magnitude +=
        dsp::DftMagnitude(seq.frames.col(f).cwiseProduct(window), layout.fft_size);
  profile.mean_magnitude /= static_cast<double>(selected.size());
  profile.frames_used = static_cast<int>(selected.size());
  return profile;
}

AudioBuffer ResynthesizeStft(const AudioBuffer &buf, const EnhanceConfig &cfg,
                             const MagnitudeRule &rule) {
  const StftLayout layout = ResolveLayout(cfg, buf.sample_rate_hz);
  AudioBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  if (buf.size() == 0) return out;

  const FrameSequence seq = SegmentSamples(buf, layout.frame_len, layout.hop);
  const Eigen::VectorXd window = dsp::HammingWindow(layout.frame_len, kAnalysisWindowA);
  const Eigen::Index total = (seq.num_frames() - 1) * layout.hop + layout.frame_len;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd norm = Eigen::VectorXd::Zero(total);

  for (Eigen::Index f = 0; f < seq.num_frames(); ++f) {
    const Eigen::VectorXcd spectrum =
        dsp::Dft(seq.frames.col(f).cwiseProduct(window), layout.fft_size);
    const Eigen::VectorXd magnitude = rule(f, spectrum);
    Eigen::VectorXcd enhanced(spectrum.size());
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
      const double mag = std::abs(spectrum(k));
      enhanced(k) = mag > 0.0 ? spectrum(k) * (magnitude(k) / mag) : std::complex<double>(0.0);
    }
    const Eigen::VectorXd frame = dsp::InverseRealDft<double>(enhanced);
    const Eigen::Index start = f * layout.hop;
    acc.segment(start, layout.frame_len) += frame.head(layout.frame_len).cwiseProduct(window);
    norm.segment(start, layout.frame_len) += window.cwiseAbs2();
  }

  out.samples.resize(buf.size());
  for (Eigen::Index i = 0; i < buf.size(); ++i)
    out.samples(i) = norm(i) < kSynthesisFloor ? acc(i) : acc(i) / norm(i);
  return out;
}

namespace {

void CheckProfile(const NoiseProfile &noise, const StftLayout &layout) {
  if (noise.fft_size() != layout.fft_size)
    throw ConfigError("noise profile has " + std::to_string(noise.fft_size()) +
                      " bins but the enhancement FFT has " + std::to_string(layout.fft_size));
}

}  // namespace

Eigen::VectorXd SubtractedMagnitude(const Eigen::VectorXd &noisy_magnitude,
                                    const Eigen::VectorXd &noise_magnitude, double alpha,
                                    double beta) {
  const Eigen::ArrayXd mag = noisy_magnitude.array();
  return (mag - alpha * noise_magnitude.array()).max(beta * mag).matrix();
}

AudioBuffer SpectralSubtract(const AudioBuffer &buf, const NoiseProfile &noise,
                             const EnhanceConfig &cfg) {
  CheckProfile(noise, ResolveLayout(cfg, buf.sample_rate_hz));
  return ResynthesizeStft(buf, cfg, [&](Eigen::Index, const Eigen::VectorXcd &spectrum) {
    return SubtractedMagnitude(spectrum.cwiseAbs(), noise.mean_magnitude, cfg.alpha, cfg.beta);
  });
}

AudioBuffer WienerFilter(const AudioBuffer &buf, const NoiseProfile &noise,
                         const EnhanceConfig &cfg) {
  const StftLayout layout = ResolveLayout(cfg, buf.sample_rate_hz);
  CheckProfile(noise, layout);
  const Eigen::ArrayXd noise_power = noise.mean_magnitude.array().square();
  Eigen::ArrayXd prev_clean_power = Eigen::ArrayXd::Zero(layout.fft_size);

  // Frames are visited in order, so the decision-directed state carries over.
  return ResynthesizeStft(buf, cfg, [&](Eigen::Index, const Eigen::VectorXcd &spectrum) {
    const Eigen::ArrayXd power = spectrum.cwiseAbs2().array();
    Eigen::VectorXd magnitude(power.size());
    for (Eigen::Index k = 0; k < power.size(); ++k) {
      double posteriori = kSnrCap, previous = kSnrCap;
      if (noise_power(k) > 0.0) {
        posteriori = power(k) / noise_power(k);
        previous = prev_clean_power(k) / noise_power(k);
      }
      double priori = kDecisionDirectedSmoothing * previous +
                      (1.0 - kDecisionDirectedSmoothing) * std::max(posteriori - 1.0, 0.0);
      priori = std::max(priori, kWienerPrioriFloor);
      const double gain = priori / (1.0 + priori);
      magnitude(k) = gain * std::sqrt(power(k));
      prev_clean_power(k) = magnitude(k) * magnitude(k);
    }
    return magnitude;
  });
}

AudioBuffer Enhance(const AudioBuffer &buf, const EnhanceConfig &cfg) {
  if (buf.size() == 0) return buf;
  const NoiseProfile noise = EstimateNoise(buf, cfg);
  switch (cfg.method) {
    case EnhanceMethod::kSpectralSubtraction:
      return SpectralSubtract(buf, noise, cfg);
    case EnhanceMethod::kWiener:
      return WienerFilter(buf, noise, cfg);
  }
  throw ConfigError("unknown enhancement method");
}

}  // namespace revspeech
