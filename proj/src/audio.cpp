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

#include "mtmel/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "mtmel/error.hpp"

namespace mtmel {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw_format(std::string("truncated file: ") + what);
  }

  std::array<char, 4> tag(const char* what) {
    need(4, what);
    std::array<char, 4> out{};
    std::memcpy(out.data(), bytes_.data() + pos_, 4);
    pos_ += 4;
    return out;
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto v = static_cast<std::uint16_t>(
        static_cast<unsigned>(bytes_[pos_]) | (static_cast<unsigned>(bytes_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }

  std::span<const std::byte> take(std::size_t n, const char* what) {
    need(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void skip(std::size_t n, const char* what) { take(n, what); }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

bool tag_is(const std::array<char, 4>& tag, const char* expected) {
  return std::memcmp(tag.data(), expected, 4) == 0;
}

std::string expected_got(const char* field, long long expected, long long got) {
  return std::string(field) + ": expected " + std::to_string(expected) + ", got " +
         std::to_string(got);
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFu));
}

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFFu));
  out.push_back(static_cast<std::byte>((v >> 8) & 0xFFu));
}

void put_tag(std::vector<std::byte>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

}  // namespace

AudioBuffer::AudioBuffer(Eigen::VectorXd s, double rate)
    : samples(std::move(s)), sample_rate(rate) {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw_invalid("sample rate must be finite and > 0");
  }
  if (!samples.allFinite()) throw_invalid("audio samples must be finite");
}

void require_pipeline_rate(const AudioBuffer& audio) {
  if (audio.sample_rate != kPipelineSampleRate) {
    throw_invalid(expected_got("sample_rate", static_cast<long long>(kPipelineSampleRate),
                               std::llround(audio.sample_rate)));
  }
}

AudioBuffer parse_wav(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  if (!tag_is(in.tag("RIFF header"), "RIFF")) throw_format("not a RIFF file");
  in.u32("RIFF size");
  if (!tag_is(in.tag("WAVE tag"), "WAVE")) throw_format("RIFF form is not WAVE");

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;

  while (in.remaining() > 0) {
    const auto id = in.tag("chunk header");
    const std::uint32_t size = in.u32("chunk size");
    if (tag_is(id, "fmt ")) {
      if (size < 16) throw_format("fmt chunk too short");
      auto body = ByteReader(in.take(size, "fmt chunk"));
      std::uint16_t format = body.u16("format");
      channels = body.u16("channels");
      rate = body.u32("sample rate");
      body.u32("byte rate");
      body.u16("block align");
      bits = body.u16("bits per sample");
      if (format == kFormatExtensible) {
        if (size < 40) throw_format("extensible fmt chunk too short");
        body.u16("cb size");
        body.u16("valid bits");
        body.u32("channel mask");
        format = body.u16("sub format");
      }
      if (format != kFormatPcm) throw_format(expected_got("encoding", kFormatPcm, format));
      if (channels != 1) throw_format(expected_got("channels", 1, channels));
      if (rate != static_cast<std::uint32_t>(kPipelineSampleRate)) {
        throw_format(expected_got("sample_rate", static_cast<long long>(kPipelineSampleRate), rate));
      }
      if (bits != 16) throw_format(expected_got("bits_per_sample", 16, bits));
      have_fmt = true;
    } else if (tag_is(id, "data")) {
      if (!have_fmt) throw_format("data chunk before fmt chunk");
      if (size % 2 != 0) throw_format("data chunk size is not a whole number of samples");
      const auto data = in.take(size, "data chunk shorter than its declared size");
      const Index count = static_cast<Index>(size / 2);
      Eigen::VectorXd samples(count);
      for (Index i = 0; i < count; ++i) {
        const auto lo = static_cast<unsigned>(data[2 * i]);
        const auto hi = static_cast<unsigned>(data[2 * i + 1]);
        const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
        samples[i] = static_cast<double>(raw) / 32768.0;
      }
      return AudioBuffer(std::move(samples), static_cast<double>(rate));
    } else {
      in.skip(size, "chunk body");
    }
    if (size % 2 != 0 && in.remaining() > 0) in.skip(1, "chunk padding");
  }
  if (!have_fmt) throw_format("missing fmt chunk");
  throw_format("missing data chunk");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw_io("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (file.bad()) throw_io("error reading '" + path.string() + "'");
  return parse_wav(std::as_bytes(std::span(raw)));
}

std::vector<std::byte> encode_wav(const AudioBuffer& audio) {
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(audio.size() * 2);
  std::vector<std::byte> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (Index i = 0; i < audio.size(); ++i) {
    const long scaled = std::clamp(std::lround(audio.samples[i] * 32768.0), -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  const auto bytes = encode_wav(audio);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw_io("cannot open '" + path.string() + "' for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw_io("error writing '" + path.string() + "'");
}

Index crop_start(const AudioBuffer& x, const CropOptions& options) {
  if (x.size() < kOneSecond) {
    throw_invalid("input has " + std::to_string(x.size()) +
                  " samples; cropping needs at least " + std::to_string(kOneSecond));
  }
  if (options.energy_window < 1 || options.energy_hop < 1) {
    throw_invalid("energy window and hop must be positive");
  }
  if (!(options.threshold_ratio >= 0.0) || !std::isfinite(options.threshold_ratio)) {
    throw_invalid("threshold ratio must be finite and >= 0");
  }
  if (x.size() == kOneSecond) return 0;

  const Index frames = (x.size() - options.energy_window) / options.energy_hop + 1;
  Eigen::VectorXd energy(frames);
  for (Index f = 0; f < frames; ++f) {
    energy[f] = x.samples.segment(f * options.energy_hop, options.energy_window).squaredNorm();
  }
  const double threshold = options.threshold_ratio * energy.maxCoeff();
  Index onset = 0;
  for (Index f = 0; f < frames; ++f) {
    if (energy[f] > threshold) {
      onset = f * options.energy_hop;
      break;
    }
  }
  return std::min(onset, x.size() - kOneSecond);
}

AudioBuffer crop_one_second(const AudioBuffer& x, const CropOptions& options) {
  const Index start = crop_start(x, options);
  return AudioBuffer(x.samples.segment(start, kOneSecond), x.sample_rate);
}

AudioBuffer crop_one_second(const AudioBuffer& x, double threshold_ratio) {
  CropOptions options;
  options.threshold_ratio = threshold_ratio;
  return crop_one_second(x, options);
}

double mean_square(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) return 0.0;
  return x.squaredNorm() / static_cast<double>(x.size());
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd gaussian_noise(Index n, std::uint64_t seed) {
  GaussianSource source(seed);
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) out[i] = source();
  return out;
}

namespace {

struct Mixed {
  Eigen::VectorXd samples;
  double gain = 0.0;
};

Mixed mix_unclipped(const AudioBuffer& x, const NoiseMixSpec& spec) {
  if (!std::isfinite(spec.snr_db)) throw_invalid("snr must be finite (or +inf to disable mixing)");
  const double signal_power = mean_square(x.samples);
  if (!(signal_power > 0.0)) throw_domain("cannot define SNR for silent signal");

  const Eigen::VectorXd noise = gaussian_noise(x.size(), spec.seed);
  const double noise_power = mean_square(noise);
  const double gain =
      std::sqrt(signal_power / (noise_power * std::pow(10.0, spec.snr_db / 10.0)));
  return {x.samples + gain * noise, gain};
}

bool mixing_disabled(const NoiseMixSpec& spec) {
  return std::isinf(spec.snr_db) && spec.snr_db > 0;
}

}  // namespace

Eigen::VectorXd mix_noise_unclipped(const AudioBuffer& x, const NoiseMixSpec& spec) {
  if (mixing_disabled(spec)) return x.samples;
  return mix_unclipped(x, spec).samples;
}

MixResult mix_noise(const AudioBuffer& x, const NoiseMixSpec& spec) {
  if (mixing_disabled(spec)) return {x, 0.0, 0};
  Mixed mixed = mix_unclipped(x, spec);
  MixResult result;
  result.noise_gain = mixed.gain;
  result.clipped = ((mixed.samples.array() > 1.0) || (mixed.samples.array() < -1.0)).count();
  if (result.clipped > 0) mixed.samples = mixed.samples.cwiseMax(-1.0).cwiseMin(1.0);
  result.audio = AudioBuffer(std::move(mixed.samples), x.sample_rate);
  return result;
}

}  // namespace mtmel
