// support/synth.hpp

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

// Synthetic signals and measurement helpers shared by the test binaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "revspeech/audio.hpp"

namespace revspeech::testing {

inline AudioBuffer MakeBuffer(Eigen::VectorXd samples, int rate) {
  AudioBuffer b;
  b.samples = std::move(samples);
  b.sample_rate_hz = rate;
  return b;
}

inline Eigen::VectorXd WhiteNoise(Eigen::Index n, double sigma, std::mt19937_64 &rng) {
  std::normal_distribution<double> dist(0.0, sigma);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = dist(rng);
  return x;
}

inline Eigen::VectorXd Sine(Eigen::Index n, double freq, double amp, int rate, double phase = 0.0) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x(i) = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate + phase);
  return x;
}

/// Linear sweep from f0 to f1 Hz with raised-cosine 10 ms edges.
inline Eigen::VectorXd Chirp(Eigen::Index n, double f0, double f1, double amp, int rate) {
  Eigen::VectorXd x(n);
  const double dur = static_cast<double>(n) / rate;
  const Eigen::Index ramp = std::min<Eigen::Index>(rate / 100, n / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * (f1 - f0) / dur * t * t);
    double env = 1.0;
    if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
    if (n - 1 - i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - 1 - i) / ramp);
    x(i) = amp * env * std::sin(phase);
  }
  return x;
}

/// Gaussian noise confined to [lo_hz, hi_hz] by zeroing FFT bins, scaled to
/// the requested RMS.
inline Eigen::VectorXd BandNoise(Eigen::Index n, double lo_hz, double hi_hz, double rms, int rate,
                                 std::mt19937_64 &rng) {
  const Eigen::VectorXd white = WhiteNoise(n, 1.0, rng);
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum;
  fft.fwd(spectrum, white);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double f = static_cast<double>(std::min(k, n - k)) * rate / n;
    if (f < lo_hz || f > hi_hz) spectrum(k) = 0.0;
  }
  Eigen::VectorXd out;
  fft.inv(out, spectrum);
  const double cur = std::sqrt(out.squaredNorm() / n);
  return cur > 0.0 ? Eigen::VectorXd(out * (rms / cur)) : out;
}

inline Eigen::VectorXd Concat(std::initializer_list<Eigen::VectorXd> parts) {
  Eigen::Index total = 0;
  for (const auto &p : parts) total += p.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const auto &p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

/// Mean over non-overlapping frames of per-frame SNR in dB, each clamped to
/// [-10, 35] dB.
inline double SegmentalSnrDb(const Eigen::VectorXd &clean, const Eigen::VectorXd &estimate,
                             Eigen::Index frame_len) {
  double sum = 0.0;
  int frames = 0;
  for (Eigen::Index start = 0; start + frame_len <= clean.size(); start += frame_len) {
    const double sig = clean.segment(start, frame_len).squaredNorm();
    const double err = (clean - estimate).segment(start, frame_len).squaredNorm();
    double snr = 10.0 * std::log10(std::max(sig, 1e-20) / std::max(err, 1e-20));
    sum += std::clamp(snr, -10.0, 35.0);
    ++frames;
  }
  return sum / frames;
}

inline double Rms(const Eigen::VectorXd &x) { return std::sqrt(x.squaredNorm() / x.size()); }

inline double RelativeL2(const Eigen::VectorXd &reference, const Eigen::VectorXd &x) {
  return (reference - x).norm() / reference.norm();
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("revspeech_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void WriteFile(const std::filesystem::path &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

}  // namespace revspeech::testing
