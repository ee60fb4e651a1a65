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

#include "mtmel/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mtmel/error.hpp"
#include "mtmel/spectral.hpp"

namespace mtmel::testkit {

namespace {

using nlohmann::json;

constexpr long double kPiL = std::numbers::pi_v<long double>;

struct ChunkMoments {
  std::vector<double> powers;
};

ChunkMoments variance_chunk(const TaperSet& tapers, Index frames, std::uint64_t chunk_seed,
                            const std::vector<double>& cos_table,
                            const std::vector<double>& sin_table) {
  const Index n = tapers.frame_len();
  GaussianSource source(chunk_seed);
  std::vector<double> frame(static_cast<std::size_t>(n));
  ChunkMoments out;
  out.powers.reserve(static_cast<std::size_t>(frames));
  const double gain_sq = tapers.gain() * tapers.gain();
  for (Index f = 0; f < frames; ++f) {
    for (auto& v : frame) v = source();
    double power = 0.0;
    for (Index k = 0; k < tapers.count(); ++k) {
      double re = 0.0, im = 0.0;
      for (Index s = 0; s < n; ++s) {
        const double v = frame[static_cast<std::size_t>(s)] * tapers.tapers()(k, s);
        re += v * cos_table[static_cast<std::size_t>(s)];
        im -= v * sin_table[static_cast<std::size_t>(s)];
      }
      power += tapers.weights()[k] * (re * re + im * im);
    }
    out.powers.push_back(gain_sq * power);
  }
  return out;
}

long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

long double int_power(long double base, int exponent) {
  long double out = 1.0L;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

long double triangle(long double x, long double lo, long double centre, long double hi) {
  if (x <= lo || x >= hi) return 0.0L;
  return x <= centre ? (x - lo) / (centre - lo) : (hi - x) / (hi - centre);
}

CheckResult make_check(std::string suite, std::string check, double value, double threshold,
                       bool passed) {
  CheckResult r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.value = value;
  r.threshold = threshold;
  r.passed = passed;
  return r;
}

constexpr Index kCheckedTaperCounts[] = {3, 5, 7, 10};
constexpr Index kFrameLengths[] = {320, 640};
constexpr WindowFamily kMultitaperFamilies[] = {WindowFamily::Hermite, WindowFamily::SwceOriginal,
                                                WindowFamily::SwceModified};
constexpr WindowFamily kClassicalFamilies[] = {WindowFamily::Hann, WindowFamily::Hamming,
                                               WindowFamily::Bartlett, WindowFamily::Boxcar,
                                               WindowFamily::Kaiser};

void orthonormality_checks(std::vector<CheckResult>& out, const TaperSet& set,
                           const std::string& label) {
  const Eigen::MatrixXd gram = set.tapers() * set.tapers().transpose();
  double norm_err = 0.0;
  double cross = 0.0;
  for (Index i = 0; i < gram.rows(); ++i) {
    norm_err = std::max(norm_err, std::abs(std::sqrt(gram(i, i)) - 1.0));
    for (Index j = 0; j < i; ++j) cross = std::max(cross, std::abs(gram(i, j)));
  }
  const bool weights_ok = (set.weights().array() >= 0.0).all();
  auto r = make_check("orthonormality", label, cross, 1e-6,
                      norm_err <= 1e-9 && cross <= 1e-6 && weights_ok);
  r.metrics = {{"max_norm_error", norm_err}, {"max_cross_product", cross},
               {"min_weight", set.weights().minCoeff()}};
  out.push_back(std::move(r));
}

std::vector<CheckResult> suite_orthonormality() {
  std::vector<CheckResult> out;
  for (Index n : kFrameLengths) {
    for (auto family : kClassicalFamilies) {
      const WindowKind kind{family};
      orthonormality_checks(out, make_classical_window(kind, n),
                            window_name(kind) + " K=1 N=" + std::to_string(n));
    }
    for (auto family : kMultitaperFamilies) {
      for (Index k : kCheckedTaperCounts) {
        const WindowKind kind{family};
        orthonormality_checks(out, make_taper_set(kind, k, n),
                              window_name(kind) + " K=" + std::to_string(k) +
                                  " N=" + std::to_string(n));
      }
    }
  }
  return out;
}

std::vector<CheckResult> suite_weights() {
  std::vector<CheckResult> out;
  for (Index n : kFrameLengths) {
    for (Index k : kCheckedTaperCounts) {
      const Eigen::VectorXd w = make_swce_tapers(k, n, false).weights();
      const Eigen::VectorXd direct = swce_weights_direct(k, n, 1.0);
      const double diff = (w - direct).cwiseAbs().maxCoeff();
      const double sum_err = std::abs(w.sum() - 1.0);
      const bool nonneg = (w.array() >= 0.0).all();
      auto r = make_check("weights", "swce K=" + std::to_string(k) + " N=" + std::to_string(n),
                          std::max(diff, sum_err), 1e-12, diff <= 1e-12 && sum_err <= 1e-12 && nonneg);
      r.metrics = {{"max_abs_diff_vs_direct", diff}, {"sum_error", sum_err},
                   {"min_weight", w.minCoeff()}};
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckResult> suite_oracle(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (Index n : kFrameLengths) {
    const TaperSet hann = make_classical_window({WindowFamily::Hann}, n);
    const Eigen::VectorXd taper = hann.taper(0).transpose();
    PowerSpectrum fast(n);
    GaussianSource source(mix_seed(seed + static_cast<std::uint64_t>(n)));
    Eigen::VectorXd frame(n), power(one_sided_bins(n));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      for (Index i = 0; i < n; ++i) frame[i] = source();
      fast.compute(frame.cwiseProduct(taper), power);
      const Eigen::VectorXd naive = naive_dft_power(frame, taper);
      const double floor = 1e-12 * naive.maxCoeff();
      for (Index f = 0; f < naive.size(); ++f) {
        worst = std::max(worst, std::abs(power[f] - naive[f]) / std::max(naive[f], floor));
      }
    }
    out.push_back(make_check("oracle", "fft vs naive DFT, 100 frames, N=" + std::to_string(n),
                             worst, 1e-6, worst <= 1e-6));
  }
  return out;
}

std::vector<CheckResult> suite_variance(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  constexpr Index n = 640;
  for (auto family : kMultitaperFamilies) {
    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (Index k : kCheckedTaperCounts) {
      const WindowKind kind{family};
      const auto report = mc_variance(make_taper_set(kind, k, n), options.variance_frames,
                                      options.seed + static_cast<std::uint64_t>(k));
      const double rel = std::abs(report.measured_rel_var / report.weights_sq_sum - 1.0);
      auto r = make_check("variance", window_name(kind) + " K=" + std::to_string(k), rel, 0.15,
                          rel <= 0.15);
      r.metrics = {{"k", static_cast<double>(report.k)},
                   {"weights_sq_sum", report.weights_sq_sum},
                   {"measured_rel_var", report.measured_rel_var},
                   {"n_frames", static_cast<double>(report.n_frames)}};
      out.push_back(std::move(r));
      decreasing = decreasing && report.measured_rel_var < previous;
      previous = report.measured_rel_var;
    }
    if (family == WindowFamily::Hermite) {
      out.push_back(make_check("variance", "hermite (uniform weights) strictly decreasing in K",
                               decreasing ? 1.0 : 0.0, 1.0, decreasing));
    }
  }
  return out;
}

std::vector<CheckResult> suite_quadrature() {
  std::vector<CheckResult> out;
  for (Index k : kCheckedTaperCounts) {
    const Eigen::MatrixXd gram = hermite_quadrature_oracle(k, 6401);
    const Eigen::MatrixXd err = gram - Eigen::MatrixXd::Identity(k, k);
    Eigen::MatrixXd off = err;
    off.diagonal().setZero();
    const double off_max = off.cwiseAbs().maxCoeff();
    const double diag_max = err.diagonal().cwiseAbs().maxCoeff();
    auto r = make_check("quadrature", "hermite gram K=" + std::to_string(k), off_max, 1e-8,
                        off_max <= 1e-8 && diag_max <= 1e-8);
    r.metrics = {{"max_off_diagonal", off_max}, {"max_diagonal_error", diag_max}};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

VarianceReport mc_variance(const TaperSet& tapers, Index n_frames, std::uint64_t seed) {
  if (n_frames < kMinVarianceFrames) {
    throw_invalid("Monte-Carlo variance needs at least " + std::to_string(kMinVarianceFrames) +
                  " frames");
  }
  const Index n = tapers.frame_len();
  const Index bin = n / 4;
  std::vector<double> cos_table(static_cast<std::size_t>(n)), sin_table(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    const long double angle = 2.0L * kPiL * static_cast<long double>((s * bin) % n) /
                              static_cast<long double>(n);
    cos_table[static_cast<std::size_t>(s)] = static_cast<double>(std::cos(angle));
    sin_table[static_cast<std::size_t>(s)] = static_cast<double>(std::sin(angle));
  }

  const Index chunks = (n_frames + kVarianceChunk - 1) / kVarianceChunk;
  std::vector<std::future<ChunkMoments>> jobs;
  for (Index c = 0; c < chunks; ++c) {
    const Index frames = std::min(kVarianceChunk, n_frames - c * kVarianceChunk);
    const std::uint64_t chunk_seed = mix_seed(seed + static_cast<std::uint64_t>(c));
    jobs.push_back(std::async(std::launch::async, variance_chunk, std::cref(tapers), frames,
                              chunk_seed, std::cref(cos_table), std::cref(sin_table)));
  }
  std::vector<double> powers;
  powers.reserve(static_cast<std::size_t>(n_frames));
  for (auto& job : jobs) {
    auto chunk = job.get();
    powers.insert(powers.end(), chunk.powers.begin(), chunk.powers.end());
  }

  long double mean = 0.0L;
  for (double p : powers) mean += p;
  mean /= static_cast<long double>(powers.size());
  long double ss = 0.0L;
  for (double p : powers) ss += (p - mean) * (p - mean);
  const long double var = ss / static_cast<long double>(powers.size() - 1);

  VarianceReport report;
  report.k = tapers.count();
  const double wsum = tapers.weights().sum();
  report.weights_sq_sum = tapers.weights().squaredNorm() / (wsum * wsum);
  report.measured_rel_var = static_cast<double>(var / (mean * mean));
  report.n_frames = n_frames;
  return report;
}

long double hermite_function_explicit(int k, long double t) {
  // H_k(t) = k! sum_m (-1)^m (2t)^(k-2m) / (m! (k-2m)!)
  long double poly = 0.0L;
  for (int m = 0; 2 * m <= k; ++m) {
    const long double term = int_power(2.0L * t, k - 2 * m) / (factorial(m) * factorial(k - 2 * m));
    poly += (m % 2 == 0) ? term : -term;
  }
  poly *= factorial(k);
  const long double norm = std::sqrt(std::sqrt(kPiL) * int_power(2.0L, k) * factorial(k));
  return std::exp(-0.5L * t * t) * poly / norm;
}

Eigen::MatrixXd hermite_quadrature_oracle(Index k_count, Index grid_points, Index frame_len) {
  if (k_count < 1) throw_invalid("need at least one Hermite function");
  if (grid_points < 10 * frame_len || grid_points < 3) {
    throw_invalid("quadrature grid must have at least 10x the frame length in points");
  }
  const long double half = std::sqrt(2.0L * static_cast<long double>(k_count) + 1.0L) + 3.0L;
  const long double step = 2.0L * half / static_cast<long double>(grid_points - 1);
  const long double centre = 0.5L * static_cast<long double>(grid_points - 1);

  // Values at nodes i and mirror (G-1-i) for i <= centre.
  const Index half_count = (grid_points + 1) / 2;
  std::vector<std::vector<long double>> pos(static_cast<std::size_t>(k_count)),
      neg(static_cast<std::size_t>(k_count));
  for (Index k = 0; k < k_count; ++k) {
    auto& p = pos[static_cast<std::size_t>(k)];
    auto& q = neg[static_cast<std::size_t>(k)];
    p.resize(static_cast<std::size_t>(half_count));
    q.resize(static_cast<std::size_t>(half_count));
    for (Index i = 0; i < half_count; ++i) {
      const Index mirror = grid_points - 1 - i;
      const long double t_mirror = (static_cast<long double>(mirror) - centre) * step;
      p[static_cast<std::size_t>(i)] = hermite_function_explicit(static_cast<int>(k), t_mirror);
      q[static_cast<std::size_t>(i)] = hermite_function_explicit(static_cast<int>(k), -t_mirror);
    }
  }

  Eigen::MatrixXd gram(k_count, k_count);
  for (Index a = 0; a < k_count; ++a) {
    for (Index b = 0; b <= a; ++b) {
      long double acc = 0.0L;
      for (Index i = 0; i < half_count; ++i) {
        const Index mirror = grid_points - 1 - i;
        const long double w = (i == 0) ? 0.5L * step : step;
        const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b),
                   ii = static_cast<std::size_t>(i);
        if (mirror == i) {
          acc += w * pos[ia][ii] * pos[ib][ii];
        } else {
          acc += w * (pos[ia][ii] * pos[ib][ii] + neg[ia][ii] * neg[ib][ii]);
        }
      }
      gram(a, b) = gram(b, a) = static_cast<double>(acc);
    }
  }
  return gram;
}

Eigen::VectorXd swce_weights_direct(Index k_count, Index n, double beta) {
  const long double group = static_cast<long double>(n / k_count);
  std::vector<long double> terms;
  long double total = 0.0L;
  for (Index k = 1; k <= k_count; ++k) {
    const long double v =
        std::cos(kPiL * static_cast<long double>(k) * group / static_cast<long double>(n)) +
        static_cast<long double>(beta);
    terms.push_back(v);
    total += v;
  }
  Eigen::VectorXd w(k_count);
  for (Index k = 0; k < k_count; ++k) w[k] = static_cast<double>(terms[static_cast<std::size_t>(k)] / total);
  return w;
}

double kaiser_series(Index i, Index n, double shape) {
  auto bessel_i0 = [](long double x) {
    long double sum = 1.0L, term = 1.0L;
    for (int m = 1; m < 500; ++m) {
      term *= (x / (2.0L * m)) * (x / (2.0L * m));
      sum += term;
      if (term < 1e-21L * sum) break;
    }
    return sum;
  };
  const long double ramp = 2.0L * static_cast<long double>(i) / static_cast<long double>(n) - 1.0L;
  const long double arg = static_cast<long double>(shape) * std::sqrt(1.0L - ramp * ramp);
  return static_cast<double>(bessel_i0(arg) / bessel_i0(static_cast<long double>(shape)));
}

Eigen::MatrixXd reference_filterbank(const FeatureConfig& config, double sample_rate) {
  const Index bins = config.frame_len / 2 + 1;
  const Index edges = config.n_mels + 2;
  auto mel = [](long double hz) { return 2595.0L * std::log10(1.0L + hz / 700.0L); };
  const long double lo_mel = mel(config.f_min), hi_mel = mel(config.f_max);
  std::vector<long double> hz(static_cast<std::size_t>(edges));
  for (Index i = 0; i < edges; ++i) {
    const long double m = lo_mel + (hi_mel - lo_mel) * static_cast<long double>(i) /
                                       static_cast<long double>(edges - 1);
    hz[static_cast<std::size_t>(i)] = 700.0L * (std::pow(10.0L, m / 2595.0L) - 1.0L);
  }
  hz.front() = config.f_min;
  hz.back() = config.f_max;

  const long double df = static_cast<long double>(sample_rate) / static_cast<long double>(config.frame_len);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(config.n_mels, bins);
  for (Index m = 0; m < config.n_mels; ++m) {
    const long double lo = hz[static_cast<std::size_t>(m)];
    const long double c = hz[static_cast<std::size_t>(m + 1)];
    const long double hi = hz[static_cast<std::size_t>(m + 2)];
    for (Index j = 0; j < bins; ++j) {
      const long double f = static_cast<long double>(j) * df;
      if (f < config.f_min || f > config.f_max) continue;
      std::vector<long double> cuts{f - 0.5L * df, f + 0.5L * df};
      for (long double p : {lo, c, hi}) {
        if (p > cuts[0] && p < cuts[1]) cuts.push_back(p);
      }
      std::sort(cuts.begin(), cuts.end());
      long double area = 0.0L;
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        area += 0.5L * (triangle(cuts[s], lo, c, hi) + triangle(cuts[s + 1], lo, c, hi)) *
                (cuts[s + 1] - cuts[s]);
      }
      fb(m, j) = static_cast<double>(area / df);
    }
  }
  return fb;
}

Eigen::MatrixXd reference_log_mel(const AudioBuffer& x, const TaperSet& tapers,
                                  const FeatureConfig& config) {
  const Index n = config.frame_len;
  const Index frames = x.size() < n ? 0 : (x.size() - n) / config.hop + 1;
  const Index bins = n / 2 + 1;
  const Eigen::MatrixXd fb = reference_filterbank(config, x.sample_rate);
  const long double gain_sq = static_cast<long double>(tapers.gain()) * tapers.gain();

  Eigen::MatrixXd out(config.n_mels, frames);
  for (Index tau = 0; tau < frames; ++tau) {
    const Eigen::VectorXd frame = x.samples.segment(tau * config.hop, n);
    std::vector<long double> power(static_cast<std::size_t>(bins), 0.0L);
    for (Index k = 0; k < tapers.count(); ++k) {
      const Eigen::VectorXd taper = tapers.taper(k).transpose();
      const Eigen::VectorXd p = naive_dft_power(frame, taper);
      for (Index f = 0; f < bins; ++f) {
        power[static_cast<std::size_t>(f)] += static_cast<long double>(tapers.weights()[k]) * p[f];
      }
    }
    for (Index m = 0; m < config.n_mels; ++m) {
      long double acc = 0.0L;
      for (Index f = 0; f < bins; ++f) {
        acc += static_cast<long double>(fb(m, f)) * gain_sq * power[static_cast<std::size_t>(f)];
      }
      out(m, tau) = static_cast<double>(std::log(std::max(acc, 1e-10L)));
    }
  }
  return out;
}

AudioBuffer synthetic_chirp() {
  constexpr Index n = 16000;
  constexpr long double rate = 16000.0L;
  constexpr long double f0 = 100.0L, f1 = 3800.0L, duration = 1.0L;
  Eigen::VectorXd s(n);
  std::uint64_t state = 0x5EEDull;
  for (Index i = 0; i < n; ++i) {
    const long double t = static_cast<long double>(i) / rate;
    const long double phase = 2.0L * kPiL * (f0 * t + 0.5L * (f1 - f0) / duration * t * t);
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    s[i] = static_cast<double>(0.5L * std::sin(phase)) + 0.01 * std::sqrt(12.0) * (u - 0.5);
  }
  return AudioBuffer(std::move(s), 16000.0);
}

std::vector<std::string> verify_suite_names() {
  return {"orthonormality", "weights", "oracle", "variance", "quadrature", "all"};
}

std::vector<CheckResult> run_verify(std::string_view suite, const VerifyOptions& options) {
  const bool all = suite == "all";
  bool known = all;
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> part) {
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  if (all || suite == "orthonormality") { known = true; append(suite_orthonormality()); }
  if (all || suite == "weights") { known = true; append(suite_weights()); }
  if (all || suite == "oracle") { known = true; append(suite_oracle(options.seed)); }
  if (all || suite == "quadrature") { known = true; append(suite_quadrature()); }
  if (all || suite == "variance") { known = true; append(suite_variance(options)); }
  if (!known) throw_invalid("unknown verify suite '" + std::string(suite) + "'");
  return out;
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::ostringstream s;
  s << std::left << std::setw(6) << "result" << "  " << std::setw(15) << "suite" << "  "
    << std::setw(48) << "check" << "  value / threshold\n";
  for (const auto& r : results) {
    s << std::left << std::setw(6) << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(15)
      << r.suite << "  " << std::setw(48) << r.check << "  " << std::scientific
      << std::setprecision(3) << r.value << " / " << r.threshold << std::defaultfloat << '\n';
  }
  return s.str();
}

std::string to_json_line(const CheckResult& result) {
  json j;
  j["suite"] = result.suite;
  j["check"] = result.check;
  j["pass"] = result.passed;
  j["value"] = result.value;
  j["threshold"] = result.threshold;
  for (const auto& [key, value] : result.metrics) {
    if (key == "k" || key == "n_frames") {
      j[key] = static_cast<long long>(value);
    } else {
      j[key] = value;
    }
  }
  return j.dump();
}

}  // namespace mtmel::testkit
