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

#ifndef MTMEL_MELFEAT_HPP
#define MTMEL_MELFEAT_HPP

#include <Eigen/Dense>

#include "mtmel/config.hpp"
#include "mtmel/spectral.hpp"

namespace mtmel {

/// Floor applied inside the log so silent frames stay finite.
inline constexpr double kLogFloor = 1e-10;

/// HTK mel scale: 2595 log10(1 + f/700).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// N_m x (N/2 + 1) triangular filterbank.
///
/// Band m spans edges_hz[m] .. edges_hz[m+2] and peaks (at 1) on
/// edges_hz[m+1]; the edges are uniform in mel between f_min and f_max. Each
/// entry is the triangle averaged over the FFT bin's frequency cell
/// [f_j - df/2, f_j + df/2], so narrow low-frequency bands falling between bin
/// centres still receive weight. Bins whose centre lies outside
/// [f_min, f_max] are zero.
struct MelFilterbank {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd edges_hz;
  double f_min = 0.0;
  double f_max = 0.0;
  Index n_mels = 0;
  double sample_rate = 0.0;
  Index frame_len = 0;

  Eigen::VectorXd centers_hz() const { return edges_hz.segment(1, n_mels); }
};

MelFilterbank build_mel_filterbank(const FeatureConfig& config, double sample_rate);

/// N_m x frame_count log-mel (or paper-literal) features.
struct MelFeatureMatrix {
  Eigen::MatrixXd values;
  FeatureConfig config;
  TransformMode transform_mode = TransformMode::LogMel;
};

MelFeatureMatrix mel_feature(const SpectrogramMatrix& spec, const MelFilterbank& fb,
                             TransformMode mode = TransformMode::LogMel);

/// Column-wise ln(max(v, kLogFloor)).
Eigen::MatrixXd floored_log(const Eigen::Ref<const Eigen::MatrixXd>& power);

/// Real part of (1/N_m) W^H L, W the N_m-point DFT matrix, applied per column.
Eigen::MatrixXd paper_literal_transform(const Eigen::Ref<const Eigen::MatrixXd>& log_mel);

}  // namespace mtmel

#endif  // MTMEL_MELFEAT_HPP
