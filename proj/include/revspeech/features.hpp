// revspeech/features.hpp

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

// MFCC front end: pre-emphasis, framing, Hamming window, DFT magnitude,
// triangular mel filterbank on the power spectrum, DCT-II cepstra, and
// regression deltas / delta-deltas.

#pragma once

#include <string>

#include <Eigen/Core>

#include "revspeech/audio.hpp"

namespace revspeech {

struct FeatureConfig {
  double preemphasis_a = 0.97;
  double frame_ms = 25.0;
  double overlap_fraction = 0.5;
  double window_a = 0.46;
  int fft_size = 0;  // 0: next power of two >= frame length
  int num_filters = 26;
  int num_ceps = 13;
  int delta_window = 2;
  double low_freq_hz = 0.0;
  double high_freq_hz = 0.0;  // <= 0: Nyquist of the signal

  bool operator==(const FeatureConfig &) const = default;
};

/// Checks the rate-independent invariants; throws ConfigError.
void Validate(const FeatureConfig &cfg);

/// Upper band edge at a given sample rate, after the Nyquist default.
double ResolveHighFreq(const FeatureConfig &cfg, int sample_rate_hz);

/// FFT length used for a frame of `frame_len` samples.
Eigen::Index ResolveFftSize(const FeatureConfig &cfg, Eigen::Index frame_len);

/// Identifies the front end (config + sample rate) that produced a matrix.
std::string FeatureFingerprint(const FeatureConfig &cfg, int sample_rate_hz);

struct FeatureMatrix {
  Eigen::MatrixXd rows;  // num_frames x (3 * num_ceps)
  std::string fingerprint;

  Eigen::Index num_frames() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

AudioBuffer Preemphasize(const AudioBuffer &buf, double a);

/// Multiplies a frame by the Hamming window of the same length.
Eigen::VectorXd ApplyHammingWindow(const Eigen::VectorXd &frame, double a);

/// |X(k)| of the zero-padded frame, k = 0 .. fft_size - 1.
Eigen::VectorXd DftMagnitude(const Eigen::VectorXd &frame, Eigen::Index fft_size);

double HzToMel(double hz);
double MelToHz(double mel);

/// Triangular filter weights, num_filters x (fft_size / 2 + 1). Filter m
/// rises linearly (in Hz) from center m-1 to a unit peak at center m and
/// falls to zero at center m+1; centers are uniform on the mel axis.
Eigen::MatrixXd MelFilterbankWeights(const FeatureConfig &cfg, int sample_rate_hz,
                                     Eigen::Index fft_size);

/// s(m) = sum_k filter_m(k) |X(k)|^2 over the first fft_size/2 + 1 bins.
Eigen::VectorXd MelFilterbank(const Eigen::VectorXd &magnitudes, const FeatureConfig &cfg,
                              int sample_rate_hz, Eigen::Index fft_size);

/// num_ceps x num_filters DCT-II basis cos(pi n (m + 0.5) / M).
Eigen::MatrixXd DctBasis(int num_ceps, int num_filters);

constexpr double kLogEnergyFloor = 1e-10;

/// c(n) = sum_m log10(max(s(m), 1e-10)) cos(pi n (m + 0.5) / M).
Eigen::VectorXd Mfcc(const Eigen::VectorXd &energies, int num_ceps);

/// Regression deltas over +-T frames with edge clamping. Rows are frames.
Eigen::MatrixXd DeltaFeatures(const Eigen::MatrixXd &ceps, int window);

/// Static cepstra only (num_frames x num_ceps).
Eigen::MatrixXd Cepstra(const AudioBuffer &buf, const FeatureConfig &cfg);

FeatureMatrix Extract(const AudioBuffer &buf, const FeatureConfig &cfg);

}  // namespace revspeech
