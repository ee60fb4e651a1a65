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

#ifndef MTMEL_BENCH_HPP
#define MTMEL_BENCH_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mtmel/audio.hpp"
#include "mtmel/config.hpp"

namespace mtmel {

inline constexpr Index kMinBenchReps = 10;
inline constexpr Index kDefaultBenchReps = 100;
inline constexpr Index kBenchWarmup = 3;

struct TimingRecord {
  Index k = 0;
  WindowKind window_kind;
  std::string setup_name;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  Index reps = 0;
};

struct LinearFit {
  double slope = 0.0;      // ms per taper
  double intercept = 0.0;  // ms
  double r_squared = 0.0;
};

struct BenchOptions {
  Index reps = kDefaultBenchReps;
  Index warmup = kBenchWarmup;
  /// Build tapers and filterbank once outside the timed region. Otherwise every
  /// repetition times the cold path: WAV decode (when `encoded_input` is set),
  /// taper generation, filterbank, spectrogram and mel projection.
  bool amortize_tapers = false;
  /// Pin the calling thread to its current CPU while timing (Linux only).
  bool pin_cpu = true;
  /// Optional WAV bytes of the input, decoded inside the cold timed region.
  std::span<const std::byte> encoded_input;
};

/// Times feature extraction once per entry of `k_values`, after
/// `options.warmup` untimed runs. Records mean and sample standard deviation
/// of the wall time (steady clock) over `options.reps` runs.
std::vector<TimingRecord> time_feature_extraction(const AudioBuffer& x,
                                                  const FeatureConfig& config,
                                                  std::span<const Index> k_values,
                                                  const BenchOptions& options = {});

/// Ordinary least squares of mean_ms on k. Needs at least three distinct k.
/// R^2 is 0 when the response has zero variance.
LinearFit fit_linear(std::span<const TimingRecord> records);
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman_rank_correlation(std::span<const double> x, std::span<const double> y);

/// Header `window,setup,k,mean_ms,std_ms,reps`, one row per record.
void write_bench_csv(std::ostream& out, std::span<const TimingRecord> records);
std::string fit_summary_line(const LinearFit& fit);
std::string timed_region_note(const BenchOptions& options);

/// Deterministic one-second 16 kHz test signal (tone sweep plus low-level
/// noise) used when no input file is given.
AudioBuffer benchmark_signal();

}  // namespace mtmel

#endif  // MTMEL_BENCH_HPP
