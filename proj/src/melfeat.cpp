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

#include "mtmel/melfeat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mtmel/error.hpp"

namespace mtmel {

namespace {

/// Integral of the unit-peak triangle (lo, centre, hi) from -inf to x.
double triangle_cdf(double x, double lo, double centre, double hi) {
  if (x <= lo) return 0.0;
  if (x <= centre) {
    const double d = x - lo;
    return d * d / (2.0 * (centre - lo));
  }
  if (x < hi) {
    const double d = hi - x;
    return 0.5 * (hi - lo) - d * d / (2.0 * (hi - centre));
  }
  return 0.5 * (hi - lo);
}

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_mel_filterbank(const FeatureConfig& config, double sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  if (!(sample_rate > 0.0)) throw_invalid("sample rate must be > 0");
  if (config.f_max > nyquist) {
    throw_invalid("f_max " + std::to_string(config.f_max) + " Hz is above Nyquist (" +
                  std::to_string(nyquist) + " Hz)");
  }
  if (!(config.f_min >= 0.0) || !(config.f_min < config.f_max)) {
    throw_invalid("need 0 <= f_min < f_max");
  }
  if (config.n_mels < 2) throw_invalid("n_mels must be >= 2");
  if (config.frame_len < 2) throw_invalid("frame length must be >= 2");

  MelFilterbank fb;
  fb.f_min = config.f_min;
  fb.f_max = config.f_max;
  fb.n_mels = config.n_mels;
  fb.sample_rate = sample_rate;
  fb.frame_len = config.frame_len;

  const double mel_lo = hz_to_mel(config.f_min);
  const double mel_hi = hz_to_mel(config.f_max);
  const Index n_edges = config.n_mels + 2;
  fb.edges_hz.resize(n_edges);
  for (Index i = 0; i < n_edges; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_edges - 1);
    fb.edges_hz[i] = mel_to_hz(mel);
  }
  // Pin the outer edges so rounding in the mel round trip cannot leak past them.
  fb.edges_hz[0] = config.f_min;
  fb.edges_hz[n_edges - 1] = config.f_max;

  const Index bins = one_sided_bins(config.frame_len);
  const double df = sample_rate / static_cast<double>(config.frame_len);
  fb.matrix = Eigen::MatrixXd::Zero(config.n_mels, bins);
  for (Index m = 0; m < config.n_mels; ++m) {
    const double lo = fb.edges_hz[m];
    const double centre = fb.edges_hz[m + 1];
    const double hi = fb.edges_hz[m + 2];
    for (Index j = 0; j < bins; ++j) {
      const double f = static_cast<double>(j) * df;
      if (f < config.f_min || f > config.f_max) continue;
      const double a = f - 0.5 * df;
      const double b = f + 0.5 * df;
      if (b <= lo || a >= hi) continue;
      fb.matrix(m, j) =
          (triangle_cdf(b, lo, centre, hi) - triangle_cdf(a, lo, centre, hi)) / df;
    }
    if (!(fb.matrix.row(m).maxCoeff() > 0.0)) {
      throw_invalid("mel band " + std::to_string(m) + " (" + std::to_string(lo) + "-" +
                    std::to_string(hi) + " Hz) covers no FFT bin inside [f_min, f_max]");
    }
  }
  return fb;
}

Eigen::MatrixXd floored_log(const Eigen::Ref<const Eigen::MatrixXd>& power) {
  // scalar log: the packet log can differ by an ulp between lanes
  return power.unaryExpr([](double v) { return std::log(std::max(v, kLogFloor)); });
}

Eigen::MatrixXd paper_literal_transform(const Eigen::Ref<const Eigen::MatrixXd>& log_mel) {
  const Index n = log_mel.rows();
  Eigen::MatrixXd basis(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      basis(a, b) = std::cos(2.0 * std::numbers::pi * static_cast<double>((a * b) % n) /
                             static_cast<double>(n));
    }
  }
  return (basis * log_mel) / static_cast<double>(n);
}

MelFeatureMatrix mel_feature(const SpectrogramMatrix& spec, const MelFilterbank& fb,
                             TransformMode mode) {
  if (fb.frame_len != spec.plan.frame_len || fb.matrix.cols() != spec.freq_bins()) {
    throw_invalid("filterbank built for frame length " + std::to_string(fb.frame_len) +
                  " but spectrogram uses " + std::to_string(spec.plan.frame_len));
  }
  if (fb.sample_rate != spec.sample_rate) {
    throw_invalid("filterbank sample rate does not match the spectrogram");
  }

  MelFeatureMatrix out;
  out.values = floored_log(fb.matrix * spec.values);
  if (mode == TransformMode::PaperLiteral) out.values = paper_literal_transform(out.values);
  out.transform_mode = mode;
  out.config.hop = spec.plan.hop;
  out.config.frame_len = spec.plan.frame_len;
  out.config.f_min = fb.f_min;
  out.config.f_max = fb.f_max;
  out.config.n_mels = fb.n_mels;
  out.config.window = spec.taper_kind;
  out.config.k = spec.k_used;
  out.config.mode = mode;
  return out;
}

}  // namespace mtmel
