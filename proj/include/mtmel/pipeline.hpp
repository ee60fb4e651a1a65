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

#ifndef MTMEL_PIPELINE_HPP
#define MTMEL_PIPELINE_HPP

#include "mtmel/audio.hpp"
#include "mtmel/config.hpp"
#include "mtmel/melfeat.hpp"
#include "mtmel/spectral.hpp"
#include "mtmel/windows.hpp"

namespace mtmel {

TaperSet make_tapers(const FeatureConfig& config);

/// Tapers and filterbank for one configuration, built once and reused across
/// signals.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureConfig& config,
                            double sample_rate = kPipelineSampleRate);

  const FeatureConfig& config() const noexcept { return config_; }
  const TaperSet& tapers() const noexcept { return tapers_; }
  const MelFilterbank& filterbank() const noexcept { return filterbank_; }

  SpectrogramMatrix spectrogram(const AudioBuffer& x) const;
  MelFeatureMatrix operator()(const AudioBuffer& x) const;

 private:
  FeatureConfig config_;
  TaperSet tapers_;
  MelFilterbank filterbank_;
};

/// tapers -> multitaper spectrogram -> mel features, all built from scratch.
/// The input must be 16 kHz.
MelFeatureMatrix extract_features(const AudioBuffer& x, const FeatureConfig& config);

}  // namespace mtmel

#endif  // MTMEL_PIPELINE_HPP
