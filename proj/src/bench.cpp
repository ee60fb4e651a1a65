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

#include "mtmel/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "mtmel/error.hpp"
#include "mtmel/feature_io.hpp"
#include "mtmel/pipeline.hpp"

#ifdef __linux__
#include <sched.h>
#endif

namespace mtmel {

namespace {

// Restores the original affinity mask on destruction.
class CpuPin {
 public:
  explicit CpuPin(bool enable) {
#ifdef __linux__
    if (!enable) return;
    if (sched_getaffinity(0, sizeof(saved_), &saved_) != 0) return;
    const int cpu = sched_getcpu();
    if (cpu < 0) return;
    cpu_set_t one;
    CPU_ZERO(&one);
    CPU_SET(cpu, &one);
    active_ = sched_setaffinity(0, sizeof(one), &one) == 0;
#else
    (void)enable;
#endif
  }
  ~CpuPin() {
#ifdef __linux__
    if (active_) sched_setaffinity(0, sizeof(saved_), &saved_);
#endif
  }
  CpuPin(const CpuPin&) = delete;
  CpuPin& operator=(const CpuPin&) = delete;

 private:
#ifdef __linux__
  cpu_set_t saved_{};
#endif
  bool active_ = false;
};

volatile double g_sink = 0.0;

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) out[order[t]] = avg;
    i = j + 1;
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<TimingRecord> time_feature_extraction(const AudioBuffer& x,
                                                  const FeatureConfig& config,
                                                  std::span<const Index> k_values,
                                                  const BenchOptions& options) {
  if (options.reps < kMinBenchReps) {
    throw_invalid("reps below minimum (" + std::to_string(options.reps) + " < " +
                  std::to_string(kMinBenchReps) + ")");
  }
  if (options.warmup < 0) throw_invalid("warm-up count must be >= 0");
  if (k_values.empty()) throw_invalid("no taper counts to benchmark");
  require_pipeline_rate(x);

  std::vector<FeatureConfig> configs;
  for (Index k : k_values) {
    FeatureConfig c = config;
    c.k = k;
    validate(c);
    configs.push_back(c);
  }
  const std::string setup = preset_name(config).value_or("custom");

  CpuPin pin(options.pin_cpu);
  std::vector<std::optional<FeatureExtractor>> prepared(configs.size());
  if (options.amortize_tapers) {
    for (std::size_t i = 0; i < configs.size(); ++i) prepared[i].emplace(configs[i], x.sample_rate);
  }
  auto run_once = [&](std::size_t i) {
    if (prepared[i]) return (*prepared[i])(x).values(0, 0);
    if (!options.encoded_input.empty()) {
      AudioBuffer decoded = parse_wav(options.encoded_input);
      if (decoded.size() > kOneSecond) decoded = crop_one_second(decoded);
      return extract_features(decoded, configs[i]).values(0, 0);
    }
    return extract_features(x, configs[i]).values(0, 0);
  };

  // Round-robin over K so slow spells on a shared host hit every K alike.
  for (Index w = 0; w < options.warmup; ++w)
    for (std::size_t i = 0; i < configs.size(); ++i) g_sink = g_sink + run_once(i);
  std::vector<std::vector<double>> ms(configs.size(),
                                      std::vector<double>(static_cast<std::size_t>(options.reps)));
  for (std::size_t r = 0; r < static_cast<std::size_t>(options.reps); ++r) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const double v = run_once(i);
      const auto stop = std::chrono::steady_clock::now();
      g_sink = g_sink + v;
      ms[i][r] = std::chrono::duration<double, std::milli>(stop - start).count();
    }
  }

  std::vector<TimingRecord> records;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& m = ms[i];
    const double mean = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(m.size());
    double ss = 0.0;
    for (double v : m) ss += (v - mean) * (v - mean);
    const double std_ms = std::sqrt(ss / static_cast<double>(m.size() - 1));
    records.push_back({configs[i].k, configs[i].window, setup, mean, std_ms, options.reps});
  }
  return records;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_invalid("fit needs as many responses as abscissae");
  const std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 3) throw_invalid("need >=3 distinct K for fit");

  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 0.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

LinearFit fit_linear(std::span<const TimingRecord> records) {
  std::vector<double> k, ms;
  for (const auto& r : records) {
    k.push_back(static_cast<double>(r.k));
    ms.push_back(r.mean_ms);
  }
  return fit_linear(k, ms);
}

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw_invalid("rank correlation needs two equal-length samples of size >= 2");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

void write_bench_csv(std::ostream& out, std::span<const TimingRecord> records) {
  out << "window,setup,k,mean_ms,std_ms,reps\n";
  for (const auto& r : records) {
    out << window_name(r.window_kind) << ',' << r.setup_name << ',' << r.k << ','
        << format_double(r.mean_ms) << ',' << format_double(r.std_ms) << ',' << r.reps << '\n';
  }
}

std::string fit_summary_line(const LinearFit& fit) {
  std::ostringstream s;
  s << "# fit: mean_ms = " << format_double(fit.intercept) << " + "
    << format_double(fit.slope) << " * k, r_squared = " << format_double(fit.r_squared);
  return s.str();
}

std::string timed_region_note(const BenchOptions& options) {
  if (options.amortize_tapers) {
    return "# timed region: spectrogram + mel projection (tapers and filterbank prebuilt, "
           "audio decoded once); feature extraction only, no neural model";
  }
  return std::string("# timed region: cold path (") +
         (options.encoded_input.empty() ? "" : "wav decode + crop + ") +
         "taper generation + filterbank + spectrogram + mel projection); feature extraction "
         "only, no neural model";
}

AudioBuffer benchmark_signal() {
  Eigen::VectorXd s(kOneSecond);
  GaussianSource noise(2022);
  for (Index i = 0; i < kOneSecond; ++i) {
    const double t = static_cast<double>(i) / kPipelineSampleRate;
    s[i] = 0.3 * std::sin(2.0 * std::numbers::pi * (200.0 * t + 900.0 * t * t)) +
           0.01 * noise();
  }
  return AudioBuffer(std::move(s), kPipelineSampleRate);
}

}  // namespace mtmel
