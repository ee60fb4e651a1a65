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

#include "mtmel/pipeline.hpp"

namespace mtmel {

TaperSet make_tapers(const FeatureConfig& config) {
  validate(config);
  return make_taper_set(config.window, config.k, config.frame_len);
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& config, double sample_rate)
    : config_(config),
      tapers_(make_tapers(config)),
      filterbank_(build_mel_filterbank(config, sample_rate)) {}

SpectrogramMatrix FeatureExtractor::spectrogram(const AudioBuffer& x) const {
  require_pipeline_rate(x);
  if (x.sample_rate != filterbank_.sample_rate) {
    throw_invalid("extractor was built for a different sample rate");
  }
  const auto plan = FramingPlan::make(config_.hop, config_.frame_len, x.size());
  return multitaper_spectrogram(x, tapers_, plan);
}

MelFeatureMatrix FeatureExtractor::operator()(const AudioBuffer& x) const {
  MelFeatureMatrix out = mel_feature(spectrogram(x), filterbank_, config_.mode);
  out.config = config_;
  return out;
}

MelFeatureMatrix extract_features(const AudioBuffer& x, const FeatureConfig& config) {
  require_pipeline_rate(x);
  return FeatureExtractor(config, x.sample_rate)(x);
}

}  // namespace mtmel
