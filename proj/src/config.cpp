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

#include "mtmel/config.hpp"

#include <json.hpp>

#include "mtmel/error.hpp"

namespace mtmel {

namespace {

using nlohmann::json;

struct Setup {
  const char* name;
  Index hop;
  Index frame_len;
  double f_min;
  double f_max;
  Index n_mels;
};

constexpr Setup kSetups[] = {
    {"A", 320, 640, 10.0, 4000.0, 100},
    {"B", 320, 320, 10.0, 4000.0, 100},
    {"C", 640, 640, 10.0, 4000.0, 100},
    {"D", 320, 640, 10.0, 4000.0, 40},
    {"E", 320, 640, 10.0, 8000.0, 40},
};

json to_json_value(const FeatureConfig& c) {
  json j;
  j["hop"] = c.hop;
  j["frame_len"] = c.frame_len;
  j["f_min"] = c.f_min;
  j["f_max"] = c.f_max;
  j["n_mels"] = c.n_mels;
  j["window"] = window_name(c.window);
  if (c.window.family == WindowFamily::Kaiser) j["kaiser_shape"] = c.window.kaiser_shape;
  j["k"] = c.k;
  j["mode"] = mode_name(c.mode);
  return j;
}

json parse_object(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_format(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw_format("config must be a JSON object");
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw_format(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string mode_name(TransformMode mode) {
  return mode == TransformMode::LogMel ? "logmel" : "paper";
}

TransformMode parse_transform_mode(std::string_view name) {
  if (name == "logmel") return TransformMode::LogMel;
  if (name == "paper" || name == "paper-literal") return TransformMode::PaperLiteral;
  throw_invalid("unknown transform mode '" + std::string(name) + "'");
}

FeatureConfig preset(std::string_view setup) {
  for (const auto& s : kSetups) {
    if (setup == s.name) {
      FeatureConfig c;
      c.hop = s.hop;
      c.frame_len = s.frame_len;
      c.f_min = s.f_min;
      c.f_max = s.f_max;
      c.n_mels = s.n_mels;
      return c;
    }
  }
  throw_invalid("unknown setup '" + std::string(setup) + "' (expected A-E)");
}

std::optional<std::string> preset_name(const FeatureConfig& c) {
  for (const auto& s : kSetups) {
    if (c.hop == s.hop && c.frame_len == s.frame_len && c.f_min == s.f_min &&
        c.f_max == s.f_max && c.n_mels == s.n_mels) {
      return std::string(s.name);
    }
  }
  return std::nullopt;
}

void validate(const FeatureConfig& c) {
  if (c.frame_len < 2) throw_invalid("frame length must be >= 2");
  if (c.hop < 1) throw_invalid("hop must be >= 1");
  if (c.hop > c.frame_len) throw_invalid("hop must not exceed the frame length");
  if (c.n_mels < 2) throw_invalid("n_mels must be >= 2");
  if (!(c.f_min >= 0.0) || !(c.f_max > c.f_min)) {
    throw_invalid("need 0 <= f_min < f_max");
  }
  if (c.window.classical()) {
    if (c.k != 1) {
      throw_invalid("classical window '" + window_name(c.window) + "' takes k=1, got k=" +
                    std::to_string(c.k));
    }
    if (c.window.family == WindowFamily::Kaiser &&
        (!std::isfinite(c.window.kaiser_shape) || c.window.kaiser_shape <= 0.0)) {
      throw_invalid("kaiser shape must be finite and > 0");
    }
  } else {
    const Index limit = c.window.family == WindowFamily::Hermite ? kMaxHermiteTapers : c.frame_len;
    if (c.k < 1 || c.k > limit) {
      throw_invalid("k=" + std::to_string(c.k) + " is out of range [1, " +
                    std::to_string(limit) + "] for window '" + window_name(c.window) + "'");
    }
  }
}

std::string to_json(const FeatureConfig& config) { return to_json_value(config).dump(); }

FeatureConfig apply_json_overrides(const FeatureConfig& base, std::string_view text) {
  const json j = parse_object(text);
  FeatureConfig c = base;
  if (j.contains("setup")) {
    const FeatureConfig p = preset(field<std::string>(j, "setup"));
    c.hop = p.hop;
    c.frame_len = p.frame_len;
    c.f_min = p.f_min;
    c.f_max = p.f_max;
    c.n_mels = p.n_mels;
  }
  if (j.contains("hop")) c.hop = field<Index>(j, "hop");
  if (j.contains("frame_len")) c.frame_len = field<Index>(j, "frame_len");
  if (j.contains("f_min")) c.f_min = field<double>(j, "f_min");
  if (j.contains("f_max")) c.f_max = field<double>(j, "f_max");
  if (j.contains("n_mels")) c.n_mels = field<Index>(j, "n_mels");
  const double shape = j.contains("kaiser_shape") ? field<double>(j, "kaiser_shape")
                                                  : c.window.kaiser_shape;
  if (j.contains("window")) {
    c.window = parse_window_kind(field<std::string>(j, "window"), shape);
  } else {
    c.window.kaiser_shape = shape;
  }
  if (j.contains("k")) c.k = field<Index>(j, "k");
  if (j.contains("mode")) c.mode = parse_transform_mode(field<std::string>(j, "mode"));
  return c;
}

FeatureConfig config_from_json(std::string_view text) {
  return apply_json_overrides(FeatureConfig{}, text);
}

}  // namespace mtmel
