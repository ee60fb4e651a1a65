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

#include "mtmel/windows.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mtmel/error.hpp"

namespace mtmel {

namespace {

constexpr double kPi = std::numbers::pi;

double classical_sample(const WindowKind& kind, Index i, Index n) {
  const double phase = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
  const double ramp = 2.0 * static_cast<double>(i) / static_cast<double>(n) - 1.0;
  switch (kind.family) {
    case WindowFamily::Hann:
      return 0.5 - 0.5 * std::cos(phase);
    case WindowFamily::Hamming:
      return 0.54 - 0.46 * std::cos(phase);
    case WindowFamily::Bartlett:
      return 1.0 - std::abs(ramp);
    case WindowFamily::Boxcar:
      return 1.0;
    case WindowFamily::Kaiser: {
      const double arg = kind.kaiser_shape * std::sqrt(std::max(0.0, 1.0 - ramp * ramp));
      return std::cyl_bessel_i(0.0, arg) / std::cyl_bessel_i(0.0, kind.kaiser_shape);
    }
    default:
      break;
  }
  throw_invalid("window '" + window_name(kind) + "' is not a classical window");
}

}  // namespace

std::string window_name(const WindowKind& kind) {
  switch (kind.family) {
    case WindowFamily::Hann: return "hann";
    case WindowFamily::Hamming: return "hamming";
    case WindowFamily::Bartlett: return "bartlett";
    case WindowFamily::Boxcar: return "boxcar";
    case WindowFamily::Kaiser: return "kaiser";
    case WindowFamily::Hermite: return "hermite";
    case WindowFamily::SwceOriginal: return "swce";
    case WindowFamily::SwceModified: return "swce-modified";
  }
  return "unknown";
}

WindowKind parse_window_kind(std::string_view name, double kaiser_shape) {
  if (name == "hann") return {WindowFamily::Hann};
  if (name == "hamming") return {WindowFamily::Hamming};
  if (name == "bartlett") return {WindowFamily::Bartlett};
  if (name == "boxcar" || name == "rect") return {WindowFamily::Boxcar};
  if (name == "kaiser") {
    if (!std::isfinite(kaiser_shape) || kaiser_shape <= 0.0) {
      throw_invalid("kaiser shape must be finite and > 0");
    }
    return WindowKind::kaiser(kaiser_shape);
  }
  if (name == "hermite") return {WindowFamily::Hermite};
  if (name == "swce" || name == "swce-original") return {WindowFamily::SwceOriginal};
  if (name == "swce-modified") return {WindowFamily::SwceModified};
  throw_invalid("unknown window '" + std::string(name) + "'");
}

TaperSet::TaperSet(Eigen::MatrixXd tapers, Eigen::VectorXd weights,
                   WindowKind kind, double gain)
    : tapers_(std::move(tapers)),
      weights_(std::move(weights)),
      kind_(kind),
      gain_(gain) {
  if (tapers_.rows() < 1) throw_invalid("taper set needs at least one taper");
  if (weights_.size() != tapers_.rows()) {
    throw_invalid("taper set has " + std::to_string(tapers_.rows()) +
                  " tapers but " + std::to_string(weights_.size()) + " weights");
  }
  if (!(gain_ > 0.0) || !std::isfinite(gain_)) throw_invalid("taper gain must be finite and > 0");
  if ((weights_.array() < 0.0).any() || !weights_.allFinite()) {
    throw_invalid("taper weights must be finite and nonnegative");
  }
  const Eigen::MatrixXd gram = tapers_ * tapers_.transpose();
  for (Index i = 0; i < gram.rows(); ++i) {
    if (std::abs(gram(i, i) - 1.0) > 2e-9) {
      throw_invalid("taper " + std::to_string(i) + " is not unit norm");
    }
    for (Index j = 0; j < i; ++j) {
      if (std::abs(gram(i, j)) > 1e-6) {
        throw_invalid("tapers " + std::to_string(j) + " and " + std::to_string(i) +
                      " are not orthogonal");
      }
    }
  }
}

TaperSet make_classical_window(WindowKind kind, Index n) {
  if (!kind.classical()) {
    throw_invalid("window '" + window_name(kind) + "' is not a classical window");
  }
  if (n < 2) throw_invalid("frame length must be >= 2");
  if (kind.family == WindowFamily::Kaiser &&
      (!std::isfinite(kind.kaiser_shape) || kind.kaiser_shape <= 0.0)) {
    throw_invalid("kaiser shape must be finite and > 0");
  }

  Eigen::MatrixXd row(1, n);
  for (Index i = 0; i < n; ++i) row(0, i) = classical_sample(kind, i, n);
  row /= row.norm();
  return TaperSet(std::move(row), Eigen::VectorXd::Ones(1), kind);
}

double hermite_half_width(Index k_count) {
  return std::sqrt(2.0 * static_cast<double>(k_count) + 1.0) + 3.0;
}

Eigen::VectorXd hermite_grid(Index k_count, Index n) {
  const double half = hermite_half_width(k_count);
  const double step = 2.0 * half / static_cast<double>(n - 1);
  const double centre = 0.5 * static_cast<double>(n - 1);
  Eigen::VectorXd t(n);
  // (i - centre) is exact in binary, so t[c + m] == -t[c - m] bit for bit.
  for (Index i = 0; i < n; ++i) t[i] = (static_cast<double>(i) - centre) * step;
  return t;
}

TaperSet make_hermite_tapers(Index k_count, Index n) {
  if (k_count < 1 || k_count > kMaxHermiteTapers) {
    throw_invalid("hermite taper count must be in [1, " +
                  std::to_string(kMaxHermiteTapers) + "], got " +
                  std::to_string(k_count));
  }
  if (n < k_count || n < 2) {
    throw_invalid("frame length " + std::to_string(n) +
                  " is shorter than the taper count");
  }

  const Eigen::VectorXd t = hermite_grid(k_count, n);
  const Eigen::ArrayXd ta = t.array();

  // psi_k = exp(-t^2/2) H_k(t) / sqrt(sqrt(pi) 2^k k!), advanced through the
  // normalized recursion so neither H_k nor k! is ever formed.
  Eigen::MatrixXd rows(k_count, n);
  rows.row(0) = (std::pow(kPi, -0.25) * (-0.5 * ta.square()).exp()).matrix().transpose();
  if (k_count > 1) {
    rows.row(1) = (std::sqrt(2.0) * ta * rows.row(0).transpose().array()).matrix().transpose();
  }
  for (Index k = 2; k < k_count; ++k) {
    const double kd = static_cast<double>(k);
    rows.row(k) = (std::sqrt(2.0 / kd) * ta * rows.row(k - 1).transpose().array() -
                   std::sqrt((kd - 1.0) / kd) * rows.row(k - 2).transpose().array())
                      .matrix()
                      .transpose();
  }

  orthonormalize_rows(rows);
  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(k_count, 1.0 / static_cast<double>(k_count));
  return TaperSet(std::move(rows), std::move(weights), {WindowFamily::Hermite});
}

Eigen::VectorXd swce_weights(Index k_count, Index n, double beta,
                             SwceWeightReading reading) {
  if (k_count < 1 || k_count > n) {
    throw_invalid("taper count " + std::to_string(k_count) +
                  " must be in [1, frame length " + std::to_string(n) + "]");
  }
  // K=1 puts the only weight at cos(pi) + beta, zero for beta = 1.
  if (k_count == 1) return Eigen::VectorXd::Ones(1);
  const double group = std::floor(static_cast<double>(n) / static_cast<double>(k_count));
  Eigen::VectorXd w(k_count);
  for (Index k = 1; k <= k_count; ++k) {
    const double arg = kPi * static_cast<double>(k) * group / static_cast<double>(n);
    w[k - 1] = reading == SwceWeightReading::Symmetric ? std::cos(arg) + beta
                                                       : std::cos(arg + beta);
  }
  const double total = w.sum();
  if (total == 0.0 || !std::isfinite(total)) {
    throw_domain("SWCE weights sum to zero");
  }
  return w / total;
}

TaperSet make_swce_tapers(Index k_count, Index n, bool modified) {
  if (k_count < 1 || k_count > n) {
    throw_invalid("taper count " + std::to_string(k_count) +
                  " must be in [1, frame length " + std::to_string(n) + "]");
  }
  const double alpha = std::sqrt(2.0) / std::sqrt(static_cast<double>(n) + 1.0);

  Eigen::MatrixXd rows(k_count, n);
  for (Index k = 1; k <= k_count; ++k) {
    for (Index s = 1; s <= n; ++s) {
      rows(k - 1, s - 1) =
          alpha * std::sin(kPi * static_cast<double>(s * k) / static_cast<double>(n + 1));
    }
  }
  orthonormalize_rows(rows);
  // modified alpha carries an extra factor K; kept outside the unit rows
  const double gain = modified ? static_cast<double>(k_count) : 1.0;

  Eigen::VectorXd weights;
  if (modified) {
    weights = swce_weights(k_count, n, 0.5)
                  .array()
                  .pow(static_cast<double>(kSwceModifiedExponent))
                  .matrix();
    weights /= weights.sum();
  } else {
    weights = swce_weights(k_count, n, 1.0);
  }
  const WindowKind kind{modified ? WindowFamily::SwceModified : WindowFamily::SwceOriginal};
  return TaperSet(std::move(rows), std::move(weights), kind, gain);
}

TaperSet make_taper_set(WindowKind kind, Index k_count, Index n) {
  switch (kind.family) {
    case WindowFamily::Hermite:
      return make_hermite_tapers(k_count, n);
    case WindowFamily::SwceOriginal:
      return make_swce_tapers(k_count, n, false);
    case WindowFamily::SwceModified:
      return make_swce_tapers(k_count, n, true);
    default:
      if (k_count != 1) {
        throw_invalid("classical window '" + window_name(kind) +
                      "' takes exactly one taper, got k=" + std::to_string(k_count));
      }
      return make_classical_window(kind, n);
  }
}

void orthonormalize_rows(Eigen::Ref<Eigen::MatrixXd> rows) {
  for (Index k = 0; k < rows.rows(); ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < k; ++j) {
        const double proj = rows.row(k).dot(rows.row(j));
        rows.row(k) -= proj * rows.row(j);
      }
    }
    const double norm = rows.row(k).norm();
    if (!(norm > 1e-12)) {
      throw_domain("taper " + std::to_string(k) + " is linearly dependent on earlier tapers");
    }
    rows.row(k) /= norm;
  }
}

}  // namespace mtmel
