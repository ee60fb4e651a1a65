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

#ifndef MTMEL_AUDIO_HPP
#define MTMEL_AUDIO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mtmel {

using Index = Eigen::Index;

inline constexpr double kPipelineSampleRate = 16000.0;
inline constexpr Index kOneSecond = 16000;

/// Mono samples on a unit scale plus the sample rate in Hz. All samples are
/// finite (checked on construction).
struct AudioBuffer {
  AudioBuffer() = default;
  AudioBuffer(Eigen::VectorXd samples, double sample_rate);

  Eigen::VectorXd samples;
  double sample_rate = kPipelineSampleRate;

  Index size() const noexcept { return samples.size(); }
};

/// Throws unless the buffer runs at the pipeline's fixed 16 kHz.
void require_pipeline_rate(const AudioBuffer& audio);

/// Parses a RIFF/WAVE PCM-16 mono 16 kHz little-endian stream. Samples are
/// the integer values divided by 32768.
AudioBuffer parse_wav(std::span<const std::byte> bytes);
AudioBuffer read_wav(const std::filesystem::path& path);

/// Encodes as PCM-16. Values are scaled by 32768, rounded to nearest and
/// saturated to the int16 range, so parse_wav(encode_wav(x)) == x whenever x
/// came from parse_wav.
std::vector<std::byte> encode_wav(const AudioBuffer& audio);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

struct CropOptions {
  double threshold_ratio = 0.1;
  Index energy_window = 400;  // 25 ms at 16 kHz
  Index energy_hop = 160;     // 10 ms at 16 kHz
};

/// One-second energy-threshold crop.
///
/// Short-term energies are taken over `energy_window` samples every
/// `energy_hop`. The onset is the first frame whose energy exceeds
/// threshold_ratio * peak energy; the 16000-sample output starts at that frame
/// unless fewer than 16000 samples remain, in which case it is right-aligned.
/// A signal with no frame above threshold (e.g. silence) yields its first
/// second.
AudioBuffer crop_one_second(const AudioBuffer& x, const CropOptions& options = {});
AudioBuffer crop_one_second(const AudioBuffer& x, double threshold_ratio);

/// Offset of the crop window chosen by crop_one_second.
Index crop_start(const AudioBuffer& x, const CropOptions& options = {});

enum class NoiseKind { WGN };

struct NoiseMixSpec {
  /// Target SNR in dB. +infinity disables mixing.
  double snr_db = std::numeric_limits<double>::infinity();
  NoiseKind noise_kind = NoiseKind::WGN;
  std::uint64_t seed = 0;
};

struct MixResult {
  AudioBuffer audio;
  double noise_gain = 0.0;
  /// Samples that left [-1, 1] after mixing and were clipped.
  Index clipped = 0;
};

/// y = x + g * n with n a seeded unit-variance Gaussian sequence and
/// g = sqrt(P_x / (P_n * 10^(snr/10))), powers being full-buffer mean squares.
MixResult mix_noise(const AudioBuffer& x, const NoiseMixSpec& spec);

/// Same as mix_noise but without the final clip, for SNR measurement.
Eigen::VectorXd mix_noise_unclipped(const AudioBuffer& x, const NoiseMixSpec& spec);

double mean_square(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Portable Gaussian source: mt19937_64 (sequence fixed by the standard),
/// 53-bit uniforms and the Box-Muller transform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Unit-variance Gaussian noise of length n.
Eigen::VectorXd gaussian_noise(Index n, std::uint64_t seed);

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace mtmel

#endif  // MTMEL_AUDIO_HPP
