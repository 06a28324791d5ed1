// revspeech/dsp.hpp

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

// Scalar-templated signal kernels shared by the enhancement and feature
// front ends. Everything here is a free function over Eigen dense types.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "revspeech/errors.hpp"

namespace revspeech {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

namespace dsp {

/// Smallest power of two that is >= n (1 for n <= 1).
inline Eigen::Index NextPowerOfTwo(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool IsPowerOfTwo(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// f_mel = 2595 log10(1 + f/700).
template <typename Scalar>
Scalar HzToMel(Scalar hz) {
  if (!(hz >= Scalar(0)))
    throw DomainError("HzToMel: frequency must be non-negative");
  using std::log10;
  return Scalar(2595) * log10(Scalar(1) + hz / Scalar(700));
}

template <typename Scalar>
Scalar MelToHz(Scalar mel) {
  using std::pow;
  return Scalar(700) * (pow(Scalar(10), mel / Scalar(2595)) - Scalar(1));
}

/// Generalized Hamming window w(n) = (1 - a) - a cos(2 pi n / (N - 1)).
/// A length-one window holds the n = 0 value, 1 - 2a.
template <typename Scalar>
VectorX<Scalar> HammingWindow(Eigen::Index length, Scalar a) {
  if (length < 1) throw ContractError("HammingWindow: length must be >= 1");
  VectorX<Scalar> w(length);
  if (length == 1) {
    w(0) = Scalar(1) - Scalar(2) * a;
    return w;
  }
  const Scalar denom = static_cast<Scalar>(length - 1);
  for (Eigen::Index n = 0; n < length; ++n) {
    w(n) = (Scalar(1) - a) -
           a * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> *
                        static_cast<Scalar>(n) / denom);
  }
  return w;
}

/// y(n) = x(n) - a x(n-1), x(-1) = 0.
template <typename Derived>
VectorX<typename Derived::Scalar> Preemphasize(
    const Eigen::MatrixBase<Derived> &x, typename Derived::Scalar a) {
  using Scalar = typename Derived::Scalar;
  if (!(a >= Scalar(0) && a < Scalar(1)))
    throw ConfigError("Preemphasize: coefficient must lie in [0, 1)");
  VectorX<Scalar> y(x.size());
  if (x.size() == 0) return y;
  y(0) = x(0);
  for (Eigen::Index n = 1; n < x.size(); ++n) y(n) = x(n) - a * x(n - 1);
  return y;
}

/// Full complex spectrum of `frame` zero-padded to `fft_size` bins.
template <typename Derived>
ComplexVectorX<typename Derived::Scalar> Dft(const Eigen::MatrixBase<Derived> &frame,
                                             Eigen::Index fft_size) {
  using Scalar = typename Derived::Scalar;
  if (frame.size() > fft_size)
    throw ContractError("Dft: frame longer than fft_size");
  VectorX<Scalar> padded = VectorX<Scalar>::Zero(fft_size);
  padded.head(frame.size()) = frame;
  ComplexVectorX<Scalar> spectrum;
  Eigen::FFT<Scalar> fft;
  fft.fwd(spectrum, padded);
  return spectrum;
}

/// |X(k)| for k = 0 .. fft_size - 1.
template <typename Derived>
VectorX<typename Derived::Scalar> DftMagnitude(const Eigen::MatrixBase<Derived> &frame,
                                               Eigen::Index fft_size) {
  return Dft(frame, fft_size).cwiseAbs();
}

/// Real inverse of a conjugate-symmetric full spectrum, scaled by 1/N.
template <typename Scalar>
VectorX<Scalar> InverseRealDft(const ComplexVectorX<Scalar> &spectrum) {
  VectorX<Scalar> out;
  Eigen::FFT<Scalar> fft;
  fft.inv(out, spectrum);
  return out;
}

}  // namespace dsp
}  // namespace revspeech
