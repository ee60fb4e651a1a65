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

#ifndef MTMEL_WINDOWS_HPP
#define MTMEL_WINDOWS_HPP

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mtmel {

using Index = Eigen::Index;

inline constexpr double kDefaultKaiserShape = 8.168;
inline constexpr Index kMaxHermiteTapers = 12;
/// Elementwise exponent applied to the modified SWCE weights (2p with p = 4).
inline constexpr int kSwceModifiedExponent = 8;

enum class WindowFamily {
  Hann,
  Hamming,
  Bartlett,
  Boxcar,
  Kaiser,
  Hermite,
  SwceOriginal,
  SwceModified,
};

struct WindowKind {
  WindowFamily family = WindowFamily::Hann;
  /// Kaiser shape parameter (the argument of the Bessel ratio). Ignored by
  /// every other family.
  double kaiser_shape = kDefaultKaiserShape;

  static WindowKind kaiser(double shape = kDefaultKaiserShape) {
    return {WindowFamily::Kaiser, shape};
  }

  bool classical() const noexcept {
    return family != WindowFamily::Hermite &&
           family != WindowFamily::SwceOriginal &&
           family != WindowFamily::SwceModified;
  }

  friend bool operator==(const WindowKind&, const WindowKind&) = default;
};

/// CLI-facing name: hann, hamming, bartlett, boxcar, kaiser, hermite, swce,
/// swce-modified.
std::string window_name(const WindowKind& kind);
WindowKind parse_window_kind(std::string_view name,
                             double kaiser_shape = kDefaultKaiserShape);

/// K orthonormal tapers of length N (one per row) with nonnegative weights.
///
/// A classical window is a TaperSet with K = 1 and weight 1. `gain` is an
/// amplitude factor applied on top of the unit-norm rows; it is 1 except for
/// the modified SWCE family, whose taper amplitude is scaled by K. Power
/// estimates built from the set are multiplied by gain^2.
///
/// The constructor checks the invariants (unit norms within 1e-9, pairwise
/// inner products within 1e-6, weights >= 0) and throws on violation.
class TaperSet {
 public:
  TaperSet(Eigen::MatrixXd tapers, Eigen::VectorXd weights, WindowKind kind,
           double gain = 1.0);

  const Eigen::MatrixXd& tapers() const noexcept { return tapers_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  WindowKind kind() const noexcept { return kind_; }
  double gain() const noexcept { return gain_; }
  Index count() const noexcept { return tapers_.rows(); }
  Index frame_len() const noexcept { return tapers_.cols(); }

  auto taper(Index k) const { return tapers_.row(k); }

 private:
  Eigen::MatrixXd tapers_;
  Eigen::VectorXd weights_;
  WindowKind kind_;
  double gain_;
};

/// Periodic classical window (denominator N), L2-normalized, as a K = 1 set.
TaperSet make_classical_window(WindowKind kind, Index n);

/// First k_count Hermite functions sampled on a symmetric grid and
/// re-orthonormalized. Uniform weights 1/K.
TaperSet make_hermite_tapers(Index k_count, Index n);

/// Sine tapers sin(pi*n*k/(N+1)), n = 1..N, k = 1..K, with cosine weights.
TaperSet make_swce_tapers(Index k_count, Index n, bool modified);

/// Dispatch on the family. Classical families require k_count == 1.
TaperSet make_taper_set(WindowKind kind, Index k_count, Index n);

/// How the beta offset in the SWCE weight formula is placed.
///
/// Symmetric: lambda_k ∝ cos(pi*k*G/N) + beta (numerator matches the
/// normalizing sum). Literal: lambda_k ∝ cos(pi*k*G/N + beta), the formula as
/// printed; it produces negative weights for K >= 7 and is exposed for
/// comparison only.
enum class SwceWeightReading { Symmetric, Literal };

/// SWCE weights for k = 1..K with G = floor(N/K), normalized to sum 1.
Eigen::VectorXd swce_weights(Index k_count, Index n, double beta,
                             SwceWeightReading reading =
                                 SwceWeightReading::Symmetric);

/// Half-width of the Hermite sampling interval: sqrt(2K + 1) + 3.
double hermite_half_width(Index k_count);

/// N points uniformly spanning [-T, T], mirrored exactly about the centre.
Eigen::VectorXd hermite_grid(Index k_count, Index n);

/// Modified Gram-Schmidt over the rows, in order, with one reorthogonalization
/// pass. Row k is only corrected against rows 0..k-1.
void orthonormalize_rows(Eigen::Ref<Eigen::MatrixXd> rows);

}  // namespace mtmel

#endif  // MTMEL_WINDOWS_HPP
