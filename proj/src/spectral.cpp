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

#include "mtmel/spectral.hpp"

#include <string>

#include <unsupported/Eigen/FFT>

namespace mtmel {

FramingPlan FramingPlan::make(Index hop, Index frame_len, Index signal_len) {
  if (hop < 1) throw_invalid("hop must be >= 1");
  if (frame_len < 1) throw_invalid("frame length must be >= 1");
  if (signal_len < 0) throw_invalid("signal length must be >= 0");
  return {hop, frame_len, signal_len};
}

namespace {

void check_plan(const AudioBuffer& x, const FramingPlan& plan) {
  if (plan.signal_len != x.size()) {
    throw_invalid("framing plan expects " + std::to_string(plan.signal_len) +
                  " samples, signal has " + std::to_string(x.size()));
  }
  if (plan.hop < 1 || plan.frame_len < 1) throw_invalid("invalid framing plan");
  if (x.size() < plan.frame_len) {
    throw_invalid("signal shorter than frame (" + std::to_string(x.size()) + " < " +
                  std::to_string(plan.frame_len) + ")");
  }
}

}  // namespace

Eigen::MatrixXd frame_signal(const AudioBuffer& x, const FramingPlan& plan) {
  check_plan(x, plan);
  const Index frames = plan.frame_count();
  Eigen::MatrixXd out(plan.frame_len, frames);
  for (Index tau = 0; tau < frames; ++tau) {
    out.col(tau) = x.samples.segment(plan.frame_start(tau), plan.frame_len);
  }
  return out;
}

struct PowerSpectrum::Impl {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum;
};

PowerSpectrum::PowerSpectrum(Index n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 1) throw_invalid("transform length must be >= 1");
  impl_->fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
}

PowerSpectrum::~PowerSpectrum() = default;
PowerSpectrum::PowerSpectrum(PowerSpectrum&&) noexcept = default;
PowerSpectrum& PowerSpectrum::operator=(PowerSpectrum&&) noexcept = default;

void PowerSpectrum::compute(const Eigen::Ref<const Eigen::VectorXd>& frame,
                            Eigen::Ref<Eigen::VectorXd> power) {
  if (frame.size() != n_ || power.size() != one_sided_bins(n_)) {
    throw_invalid("power spectrum size mismatch");
  }
  const Eigen::VectorXd input = frame;
  impl_->fft.fwd(impl_->spectrum, input);
  power = impl_->spectrum.head(one_sided_bins(n_)).cwiseAbs2();
}

SpectrogramMatrix single_taper_spectrogram(const AudioBuffer& x,
                                           const Eigen::Ref<const Eigen::VectorXd>& taper,
                                           const FramingPlan& plan, WindowKind kind) {
  check_plan(x, plan);
  if (taper.size() != plan.frame_len) {
    throw_invalid("taper length " + std::to_string(taper.size()) +
                  " does not match frame length " + std::to_string(plan.frame_len));
  }
  const Index frames = plan.frame_count();
  SpectrogramMatrix out{Eigen::MatrixXd(one_sided_bins(plan.frame_len), frames),
                        x.sample_rate, plan, kind, 1};
  PowerSpectrum power(plan.frame_len);
  Eigen::VectorXd windowed(plan.frame_len);
  for (Index tau = 0; tau < frames; ++tau) {
    windowed = x.samples.segment(plan.frame_start(tau), plan.frame_len).cwiseProduct(taper);
    power.compute(windowed, out.values.col(tau));
  }
  return out;
}

SpectrogramMatrix multitaper_spectrogram(const AudioBuffer& x, const TaperSet& tapers,
                                         const FramingPlan& plan) {
  check_plan(x, plan);
  if (tapers.frame_len() != plan.frame_len) {
    throw_invalid("taper length " + std::to_string(tapers.frame_len()) +
                  " does not match frame length " + std::to_string(plan.frame_len));
  }
  const Index frames = plan.frame_count();
  const Index bins = one_sided_bins(plan.frame_len);
  SpectrogramMatrix out{Eigen::MatrixXd::Zero(bins, frames), x.sample_rate, plan,
                        tapers.kind(), tapers.count()};

  const double gain_sq = tapers.gain() * tapers.gain();
  PowerSpectrum power(plan.frame_len);
  Eigen::VectorXd windowed(plan.frame_len);
  Eigen::VectorXd eigenspectrum(bins);
  for (Index tau = 0; tau < frames; ++tau) {
    const auto frame = x.samples.segment(plan.frame_start(tau), plan.frame_len);
    auto column = out.values.col(tau);
    for (Index k = 0; k < tapers.count(); ++k) {
      windowed = frame.cwiseProduct(tapers.taper(k).transpose());
      power.compute(windowed, eigenspectrum);
      column += tapers.weights()[k] * eigenspectrum;
    }
    if (gain_sq != 1.0) column *= gain_sq;
  }
  return out;
}

}  // namespace mtmel
