// Copyright 2026 The mtmel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTMEL_SPECTRAL_HPP
#define MTMEL_SPECTRAL_HPP

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "mtmel/audio.hpp"
#include "mtmel/error.hpp"
#include "mtmel/windows.hpp"

namespace mtmel {

/// Number of nonnegative-frequency bins of a length-n real transform.
constexpr Index one_sided_bins(Index n) noexcept { return n / 2 + 1; }

/// Frame layout over a signal: frames start at hop * tau and never run past
/// the last sample, so frame_count = floor((M - N) / H) + 1 when M >= N.
struct FramingPlan {
  Index hop = 0;
  Index frame_len = 0;
  Index signal_len = 0;

  /// Validates hop >= 1 and frame_len >= 1. A signal shorter than the frame
  /// is allowed here (frame_count() == 0); framing it is an error.
  static FramingPlan make(Index hop, Index frame_len, Index signal_len);

  Index frame_count() const noexcept {
    if (signal_len < frame_len || hop < 1) return 0;
    return (signal_len - frame_len) / hop + 1;
  }
  Index frame_start(Index tau) const noexcept { return hop * tau; }
};

/// One-sided power spectrogram: freq_bins() x frame_count, all entries >= 0.
struct SpectrogramMatrix {
  Eigen::MatrixXd values;
  double sample_rate = kPipelineSampleRate;
  FramingPlan plan;
  WindowKind taper_kind;
  Index k_used = 1;

  Index freq_bins() const noexcept { return values.rows(); }
  Index frame_count() const noexcept { return values.cols(); }
};

/// Frames as columns of an N x (T+1) matrix; column tau holds
/// x[H*tau .. H*tau + N - 1]. No padding.
Eigen::MatrixXd frame_signal(const AudioBuffer& x, const FramingPlan& plan);

/// |FFT|^2 over the one-sided bins for a fixed transform length. Holds the FFT
/// plan, so one instance per thread.
class PowerSpectrum {
 public:
  explicit PowerSpectrum(Index n);
  ~PowerSpectrum();
  PowerSpectrum(PowerSpectrum&&) noexcept;
  PowerSpectrum& operator=(PowerSpectrum&&) noexcept;

  Index size() const noexcept { return n_; }

  /// power[f] = |sum_n frame[n] e^{-j 2 pi n f / N}|^2 for f = 0..N/2.
  void compute(const Eigen::Ref<const Eigen::VectorXd>& frame,
               Eigen::Ref<Eigen::VectorXd> power);

 private:
  struct Impl;
  Index n_;
  std::unique_ptr<Impl> impl_;
};

SpectrogramMatrix single_taper_spectrogram(
    const AudioBuffer& x, const Eigen::Ref<const Eigen::VectorXd>& taper,
    const FramingPlan& plan, WindowKind kind = {WindowFamily::Boxcar});

/// sum_k weight_k * gain^2 * |STFT with taper k|^2.
SpectrogramMatrix multitaper_spectrogram(const AudioBuffer& x, const TaperSet& tapers,
                                         const FramingPlan& plan);

/// Direct O(N^2) evaluation of the one-sided power of the tapered frame.
///
/// Accumulates in long double with the twiddle index reduced mod N, sharing
/// no code with the FFT path; used as the reference the fast path is checked
/// against.
template <typename FrameDerived, typename TaperDerived>
Eigen::VectorXd naive_dft_power(const Eigen::MatrixBase<FrameDerived>& frame,
                                const Eigen::MatrixBase<TaperDerived>& taper) {
  const Index n = frame.size();
  if (taper.size() != n) {
    throw_invalid("frame length " + std::to_string(n) + " does not match taper length " +
                  std::to_string(taper.size()));
  }
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  std::vector<long double> cos_t(static_cast<std::size_t>(n)), sin_t(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const long double angle = two_pi * static_cast<long double>(j) / static_cast<long double>(n);
    cos_t[static_cast<std::size_t>(j)] = std::cos(angle);
    sin_t[static_cast<std::size_t>(j)] = std::sin(angle);
  }
  std::vector<long double> v(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    v[static_cast<std::size_t>(s)] =
        static_cast<long double>(frame(s)) * static_cast<long double>(taper(s));
  }
  Eigen::VectorXd power(one_sided_bins(n));
  for (Index f = 0; f < power.size(); ++f) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (Index s = 0; s < n; ++s) {
      const auto j = static_cast<std::size_t>((s * f) % n);
      re += v[static_cast<std::size_t>(s)] * cos_t[j];
      im -= v[static_cast<std::size_t>(s)] * sin_t[j];
    }
    power[f] = static_cast<double>(re * re + im * im);
  }
  return power;
}

}  // namespace mtmel

#endif  // MTMEL_SPECTRAL_HPP
