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

#ifndef MTMEL_FEATURE_IO_HPP
#define MTMEL_FEATURE_IO_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtmel/config.hpp"
#include "mtmel/melfeat.hpp"

namespace mtmel {

/// Binary feature file, all integers little-endian:
///
///   offset  size  field
///        0     8  magic "MTMELFT\0"
///        8     4  version (1)
///       12     4  dtype code (1 = float64 little-endian)
///       16     8  rows (N_m)
///       24     8  cols (frames)
///       32     8  config_len
///       40     *  config echo, canonical JSON, config_len bytes
///        *     *  rows * cols float64 values, row-major
inline constexpr std::array<char, 8> kFeatureMagic = {'M', 'T', 'M', 'E', 'L', 'F', 'T', '\0'};
inline constexpr std::uint32_t kFeatureFormatVersion = 1;
inline constexpr std::uint32_t kDtypeFloat64Le = 1;

struct FeatureFileHeader {
  std::uint32_t version = kFeatureFormatVersion;
  std::uint32_t dtype = kDtypeFloat64Le;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::string config_json;
};

struct FeatureFile {
  FeatureFileHeader header;
  Eigen::MatrixXd values;

  FeatureConfig config() const { return config_from_json(header.config_json); }
};

std::vector<std::byte> encode_feature_file(const Eigen::Ref<const Eigen::MatrixXd>& values,
                                           const std::string& config_json);
std::vector<std::byte> encode_feature_file(const MelFeatureMatrix& features);
FeatureFile decode_feature_file(std::span<const std::byte> bytes);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// First line "# config: <json>", then one comma-separated line per mel band.
std::string feature_csv(const MelFeatureMatrix& features);

/// Linear-interpolation percentile (p in [0, 100]) of the values.
double percentile(std::vector<double> values, double p);

/// 8-bit binary PGM ("P5"). Columns are frames, the top row is the highest
/// band. Values map affinely from [p1, p99] onto [0, 255] and clamp outside.
struct PgmRendering {
  std::vector<std::byte> bytes;
  double low = 0.0;   // 1st percentile
  double high = 0.0;  // 99th percentile
};

PgmRendering render_pgm(const MelFeatureMatrix& features);

/// Text written next to a PGM describing how grey levels map back to values.
std::string pgm_scale_note(const PgmRendering& rendering);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace mtmel

#endif  // MTMEL_FEATURE_IO_HPP
