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

#ifndef MTMEL_CONFIG_HPP
#define MTMEL_CONFIG_HPP

#include <optional>
#include <string>
#include <string_view>

#include "mtmel/windows.hpp"

namespace mtmel {

enum class TransformMode {
  LogMel,        // ln(max(M s, 1e-10))
  PaperLiteral,  // Re[(1/N_m) W^H ln(max(M s, 1e-10))], W the N_m-point DFT
};

std::string mode_name(TransformMode mode);
TransformMode parse_transform_mode(std::string_view name);

/// Analysis parameters for one feature variant.
struct FeatureConfig {
  Index hop = 320;
  Index frame_len = 640;
  double f_min = 10.0;
  double f_max = 4000.0;
  Index n_mels = 100;
  WindowKind window{WindowFamily::Hann};
  Index k = 1;
  TransformMode mode = TransformMode::LogMel;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Setups A-E: (H, N, f_min, f_max, N_m) =
///   A (320, 640, 10, 4000, 100)   B (320, 320, 10, 4000, 100)
///   C (640, 640, 10, 4000, 100)   D (320, 640, 10, 4000, 40)
///   E (320, 640, 10, 8000, 40)
/// Window and K are left at Hann / 1.
FeatureConfig preset(std::string_view setup);
/// Setup label ("A".."E") when the analysis fields match a preset.
std::optional<std::string> preset_name(const FeatureConfig& config);

/// Throws on H < 1, H > N, N < 2, N_m < 2, or an invalid taper count for the
/// window family.
void validate(const FeatureConfig& config);

/// Canonical JSON (keys sorted) used for header echoes and config files.
std::string to_json(const FeatureConfig& config);
FeatureConfig config_from_json(std::string_view json);

/// Applies the fields present in a JSON object on top of `base`. A "setup"
/// key, if present, resets the analysis fields to that preset first.
FeatureConfig apply_json_overrides(const FeatureConfig& base, std::string_view json);

}  // namespace mtmel

#endif  // MTMEL_CONFIG_HPP
