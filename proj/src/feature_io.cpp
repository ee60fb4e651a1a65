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

#include "mtmel/feature_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mtmel/error.hpp"

namespace mtmel {

namespace {

constexpr std::size_t kFixedHeaderBytes = 40;

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xFFu));
  }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(std::to_integer<unsigned>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

}  // namespace

std::vector<std::byte> encode_feature_file(const Eigen::Ref<const Eigen::MatrixXd>& values,
                                           const std::string& config_json) {
  std::vector<std::byte> out;
  out.reserve(kFixedHeaderBytes + config_json.size() +
              static_cast<std::size_t>(values.size()) * 8);
  for (char c : kFeatureMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint32_t>(out, kFeatureFormatVersion);
  put_le<std::uint32_t>(out, kDtypeFloat64Le);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(values.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(values.cols()));
  put_le<std::uint64_t>(out, config_json.size());
  for (char c : config_json) out.push_back(static_cast<std::byte>(c));
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(values(r, c)));
    }
  }
  return out;
}

std::vector<std::byte> encode_feature_file(const MelFeatureMatrix& features) {
  return encode_feature_file(features.values, to_json(features.config));
}

FeatureFile decode_feature_file(std::span<const std::byte> bytes) {
  if (bytes.size() < kFixedHeaderBytes) throw_format("feature file truncated in header");
  if (std::memcmp(bytes.data(), kFeatureMagic.data(), kFeatureMagic.size()) != 0) {
    throw_format("not a feature file (bad magic)");
  }
  FeatureFile file;
  file.header.version = get_le<std::uint32_t>(bytes, 8);
  file.header.dtype = get_le<std::uint32_t>(bytes, 12);
  file.header.rows = get_le<std::uint64_t>(bytes, 16);
  file.header.cols = get_le<std::uint64_t>(bytes, 24);
  const auto config_len = get_le<std::uint64_t>(bytes, 32);
  if (file.header.version != kFeatureFormatVersion) {
    throw_format("unsupported feature file version " + std::to_string(file.header.version));
  }
  if (file.header.dtype != kDtypeFloat64Le) {
    throw_format("unsupported dtype code " + std::to_string(file.header.dtype));
  }
  const std::size_t remaining = bytes.size() - kFixedHeaderBytes;
  if (config_len > remaining) throw_format("feature file truncated in config echo");
  const std::size_t data_bytes = remaining - config_len;
  const std::uint64_t rows = file.header.rows;
  const std::uint64_t cols = file.header.cols;
  if (cols != 0 && rows > data_bytes / 8 / cols) throw_format("feature file truncated in data");
  if (rows * cols * 8 != data_bytes) throw_format("feature file size does not match its header");

  file.header.config_json.assign(reinterpret_cast<const char*>(bytes.data()) + kFixedHeaderBytes,
                                 config_len);
  file.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t offset = kFixedHeaderBytes + config_len;
  for (Index r = 0; r < file.values.rows(); ++r) {
    for (Index c = 0; c < file.values.cols(); ++c, offset += 8) {
      file.values(r, c) = std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset));
    }
  }
  return file;
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string feature_csv(const MelFeatureMatrix& features) {
  std::string out = "# config: " + to_json(features.config) + "\n";
  for (Index r = 0; r < features.values.rows(); ++r) {
    for (Index c = 0; c < features.values.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(features.values(r, c));
    }
    out += '\n';
  }
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw_invalid("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

PgmRendering render_pgm(const MelFeatureMatrix& features) {
  const auto& v = features.values;
  if (v.size() == 0) throw_invalid("cannot render an empty feature matrix");
  std::vector<double> all(v.data(), v.data() + v.size());
  PgmRendering out;
  out.low = percentile(all, 1.0);
  out.high = percentile(std::move(all), 99.0);
  const double span = out.high - out.low;

  std::ostringstream header;
  header << "P5\n# config: " << to_json(features.config) << "\n# scale: affine [p1="
         << format_double(out.low) << ", p99=" << format_double(out.high)
         << "] -> [0, 255], clamped\n"
         << v.cols() << ' ' << v.rows() << "\n255\n";
  const std::string text = header.str();
  out.bytes.reserve(text.size() + static_cast<std::size_t>(v.size()));
  for (char c : text) out.bytes.push_back(static_cast<std::byte>(c));
  for (Index r = v.rows() - 1; r >= 0; --r) {
    for (Index c = 0; c < v.cols(); ++c) {
      const double level = span > 0.0 ? 255.0 * (v(r, c) - out.low) / span : 0.0;
      out.bytes.push_back(static_cast<std::byte>(std::lround(std::clamp(level, 0.0, 255.0))));
    }
  }
  return out;
}

std::string pgm_scale_note(const PgmRendering& rendering) {
  std::ostringstream note;
  note << "grey = round(255 * (value - p1) / (p99 - p1)), clamped to [0, 255]\n"
       << "value = natural-log mel power (or its paper-literal transform)\n"
       << "p1 = " << format_double(rendering.low) << "\n"
       << "p99 = " << format_double(rendering.high) << "\n"
       << "percentiles: linear interpolation between order statistics\n"
       << "orientation: columns are frames, top row is the highest mel band\n";
  return note.str();
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw_io("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (file.bad()) throw_io("error reading '" + path.string() + "'");
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw_io("cannot open '" + path.string() + "' for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!file) throw_io("error writing '" + path.string() + "'");
}

}  // namespace mtmel
