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

#ifndef MTMEL_TESTKIT_HPP
#define MTMEL_TESTKIT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mtmel/audio.hpp"
#include "mtmel/config.hpp"
#include "mtmel/windows.hpp"

// Reference implementations and statistical harnesses. Nothing here calls the
// FFT path, the filterbank builder or the Hermite recursion it is used to check.

namespace mtmel::testkit {

inline constexpr Index kMinVarianceFrames = 1000;
inline constexpr Index kVarianceChunk = 1000;

struct VarianceReport {
  Index k = 0;
  double weights_sq_sum = 0.0;  // sum lambda_k^2 / (sum lambda_k)^2
  double measured_rel_var = 0.0;
  Index n_frames = 0;
};

/// Monte-Carlo relative variance (variance / mean^2) of the multitaper power
/// at bin N/4 over `n_frames` independent WGN(0, 1) frames.
///
/// Frames are drawn in chunks of kVarianceChunk; chunk c uses a GaussianSource
/// seeded with mix_seed(seed + c), so the result does not depend on how the
/// chunks are scheduled. The bin power is a direct single-bin DFT sum.
VarianceReport mc_variance(const TaperSet& tapers, Index n_frames, std::uint64_t seed);

/// psi_k(t) from the explicit Hermite polynomial sum, in long double.
long double hermite_function_explicit(int k, long double t);

/// Gram matrix of the first k_count continuous Hermite functions integrated by
/// the trapezoid rule over the production interval [-T, T] with `grid_points`
/// nodes. Mirror-image nodes are summed in pairs, so odd/even products cancel
/// exactly. Requires grid_points >= 10 * frame_len.
Eigen::MatrixXd hermite_quadrature_oracle(Index k_count, Index grid_points,
                                          Index frame_len = 640);

/// SWCE weights evaluated term by term in long double (symmetric reading).
Eigen::VectorXd swce_weights_direct(Index k_count, Index n, double beta);

/// Kaiser window value from the power series of I0, before normalization.
double kaiser_series(Index i, Index n, double shape);

/// Bin-averaged triangular filterbank built independently of the production
/// builder (piecewise trapezoid integration of each linear segment).
Eigen::MatrixXd reference_filterbank(const FeatureConfig& config, double sample_rate);

/// Log-mel features through the naive chain: direct DFT per frame and taper,
/// weighted sum, explicit filterbank product, floored natural log.
Eigen::MatrixXd reference_log_mel(const AudioBuffer& x, const TaperSet& tapers,
                                  const FeatureConfig& config);

/// One-second 16 kHz linear chirp (100 Hz to 3800 Hz, amplitude 0.5) plus
/// uniform noise of standard deviation 0.01 from an integer generator.
AudioBuffer synthetic_chirp();

struct CheckResult {
  std::string suite;
  std::string check;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
};

struct VerifyOptions {
  Index variance_frames = 10000;
  std::uint64_t seed = 1;
};

/// Suites: orthonormality, weights, oracle, variance, quadrature, all.
std::vector<std::string> verify_suite_names();
std::vector<CheckResult> run_verify(std::string_view suite, const VerifyOptions& options = {});

std::string format_table(const std::vector<CheckResult>& results);
std::string to_json_line(const CheckResult& result);

}  // namespace mtmel::testkit

#endif  // MTMEL_TESTKIT_HPP
