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


#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "golden.hpp"
#include "mtmel/config.hpp"
#include "mtmel/melfeat.hpp"
#include "mtmel/pipeline.hpp"
#include "mtmel/spectral.hpp"
#include "mtmel/testkit.hpp"
#include "test_support.hpp"

using namespace mtmel;
using mtmel::test::error_category;

namespace {

SpectrogramMatrix constant_spectrogram(const FeatureConfig& cfg, double value, Index frames) {
  SpectrogramMatrix s;
  s.values = Eigen::MatrixXd::Constant(one_sided_bins(cfg.frame_len), frames, value);
  s.plan = FramingPlan::make(cfg.hop, cfg.frame_len, cfg.frame_len + (frames - 1) * cfg.hop);
  s.sample_rate = 16000.0;
  return s;
}

}  // namespace

TEST_CASE("htk mel scale") {
  CHECK(hz_to_mel(0.0) == 0.0);
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-15));
  for (double f : {10.0, 440.0, 4000.0, 8000.0}) {
    CHECK(mel_to_hz(hz_to_mel(f)) == doctest::Approx(f).epsilon(1e-13));
  }
}

TEST_CASE("filterbank shapes for the setups") {
  const MelFilterbank a = build_mel_filterbank(preset("A"), 16000.0);
  CHECK(a.matrix.rows() == 100);
  CHECK(a.matrix.cols() == 321);
  const MelFilterbank b = build_mel_filterbank(preset("B"), 16000.0);
  CHECK(b.matrix.cols() == 161);
  const MelFilterbank e = build_mel_filterbank(preset("E"), 16000.0);
  CHECK(e.matrix.rows() == 40);
  CHECK(e.f_max == 8000.0);
}

TEST_CASE("filterbank argument errors") {
  FeatureConfig cfg = preset("A");
  cfg.f_max = 9000.0;
  CHECK(error_category([&] { build_mel_filterbank(cfg, 16000.0); }) == ErrorCategory::InvalidArgument);
  cfg.f_max = 10.0;
  CHECK(error_category([&] { build_mel_filterbank(cfg, 16000.0); }) == ErrorCategory::InvalidArgument);
  cfg = preset("A");
  cfg.f_min = -1.0;
  CHECK(error_category([&] { build_mel_filterbank(cfg, 16000.0); }) == ErrorCategory::InvalidArgument);
  cfg = preset("A");
  cfg.n_mels = 1;
  CHECK(error_category([&] { build_mel_filterbank(cfg, 16000.0); }) == ErrorCategory::InvalidArgument);
  // 100 bands squeezed into a few bins leaves some band empty
  cfg = preset("B");
  cfg.frame_len = 32;
  cfg.hop = 16;
  CHECK_THROWS_AS(build_mel_filterbank(cfg, 16000.0), Error);
}

TEST_CASE("filterbank structural invariants") {
  for (const char* name : {"A", "B", "C", "D", "E"}) {
    const FeatureConfig cfg = preset(name);
    const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
    CAPTURE(name);
    CHECK(fb.matrix.minCoeff() >= 0.0);
    for (Index m = 0; m < fb.n_mels; ++m) CHECK(fb.matrix.row(m).maxCoeff() > 0.0);
    const Eigen::VectorXd centres = fb.centers_hz();
    for (Index m = 1; m < centres.size(); ++m) CHECK(centres[m] > centres[m - 1]);
    const double bin_hz = 16000.0 / static_cast<double>(cfg.frame_len);
    for (Index f = 0; f < fb.matrix.cols(); ++f) {
      const double hz = bin_hz * static_cast<double>(f);
      if (hz < cfg.f_min || hz > cfg.f_max) CHECK(fb.matrix.col(f).isZero(0.0));
    }
  }
}

TEST_CASE("adjacent unit-peak triangles sum to the peak inside the band") {
  for (const char* name : {"A", "B", "D", "E"}) {
    const FeatureConfig cfg = preset(name);
    const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
    const double bin_hz = 16000.0 / static_cast<double>(cfg.frame_len);
    const Eigen::VectorXd centres = fb.centers_hz();
    for (Index f = 0; f < fb.matrix.cols(); ++f) {
      const double lo = bin_hz * (static_cast<double>(f) - 0.5);
      const double hi = bin_hz * (static_cast<double>(f) + 0.5);
      // the whole bin cell lies between the first and last centre
      if (lo >= centres[0] && hi <= centres[centres.size() - 1]) {
        CAPTURE(name);
        CAPTURE(f);
        CHECK(std::abs(fb.matrix.col(f).sum() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("filterbank matches the piecewise reference") {
  for (const char* name : {"A", "B", "C", "D", "E"}) {
    const FeatureConfig cfg = preset(name);
    const Eigen::MatrixXd ref = testkit::reference_filterbank(cfg, 16000.0);
    const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
    CAPTURE(name);
    CHECK((fb.matrix - ref).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constant power propagates to log row sums") {
  const FeatureConfig cfg = preset("A");
  const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
  const MelFeatureMatrix out = mel_feature(constant_spectrogram(cfg, 1.0, 3), fb);
  const Eigen::VectorXd expected = fb.matrix.rowwise().sum().array().log().matrix();
  for (Index t = 0; t < 3; ++t) CHECK((out.values.col(t) - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("silence hits the log floor") {
  const FeatureConfig cfg = preset("D");
  const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
  const MelFeatureMatrix out = mel_feature(constant_spectrogram(cfg, 0.0, 4), fb);
  CHECK((out.values.array() == std::log(1e-10)).all());
  CHECK(out.values.allFinite());
}

TEST_CASE("scaling the power shifts the log by ln c") {
  const FeatureConfig cfg = preset("A");
  const FeatureExtractor fx(cfg);
  const AudioBuffer x = testkit::synthetic_chirp();
  const SpectrogramMatrix s = fx.spectrogram(x);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    SpectrogramMatrix scaled = s;
    scaled.values *= c;
    const Eigen::MatrixXd a = mel_feature(s, fx.filterbank()).values;
    const Eigen::MatrixXd b = mel_feature(scaled, fx.filterbank()).values;
    REQUIRE(a.minCoeff() > std::log(1e-10));
    REQUIRE(b.minCoeff() > std::log(1e-10));
    CHECK(((b - a).array() - std::log(c)).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("pipeline equals the monolithic per-frame evaluation") {
  const AudioBuffer x = testkit::synthetic_chirp();
  for (WindowKind kind : {WindowKind{WindowFamily::Hann}, WindowKind{WindowFamily::Hermite},
                          WindowKind{WindowFamily::SwceOriginal}, WindowKind{WindowFamily::SwceModified}}) {
    FeatureConfig cfg = preset("A");
    cfg.window = kind;
    cfg.k = kind.classical() ? 1 : 5;
    const MelFeatureMatrix got = extract_features(x, cfg);

    const TaperSet set = make_taper_set(kind, cfg.k, cfg.frame_len);
    const MelFilterbank fb = build_mel_filterbank(cfg, 16000.0);
    PowerSpectrum fft(cfg.frame_len);
    const Index frames = (x.size() - cfg.frame_len) / cfg.hop + 1;
    Eigen::MatrixXd expected(cfg.n_mels, frames);
    Eigen::VectorXd power(one_sided_bins(cfg.frame_len));
    for (Index t = 0; t < frames; ++t) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(power.size());
      for (Index k = 0; k < set.count(); ++k) {
        const Eigen::VectorXd frame =
            x.samples.segment(t * cfg.hop, cfg.frame_len).cwiseProduct(set.taper(k).transpose());
        fft.compute(frame, power);
        s += set.gain() * set.gain() * set.weights()[k] * power;
      }
      expected.col(t) = (fb.matrix * s).cwiseMax(1e-10).array().log().matrix();
    }
    CAPTURE(window_name(kind));
    REQUIRE(got.values.rows() == expected.rows());
    REQUIRE(got.values.cols() == expected.cols());
    CHECK((got.values - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("paper-literal transform") {
  const Index nm = 8;
  Eigen::MatrixXd l(nm, 2);
  l.col(0).setConstant(3.0);
  for (Index i = 0; i < nm; ++i) l(i, 1) = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / nm);
  const Eigen::MatrixXd out = paper_literal_transform(l);
  // constant column: only the zero-quefrency term survives
  CHECK(out(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(out.col(0).tail(nm - 1).cwiseAbs().maxCoeff() <= 1e-14);
  // a single cosine lands half in index 1 and half in index N_m-1
  CHECK(out(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out(nm - 1, 1) == doctest::Approx(0.5).epsilon(1e-14));

  // direct complex evaluation
  const Eigen::MatrixXd r = mtmel::test::random_vector(nm * 3, 4).reshaped(nm, 3);
  const Eigen::MatrixXd fast = paper_literal_transform(r);
  for (Index c = 0; c < 3; ++c) {
    for (Index a = 0; a < nm; ++a) {
      std::complex<double> acc = 0.0;
      for (Index b = 0; b < nm; ++b) {
        acc += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a * b) / nm) * r(b, c);
      }
      CHECK(fast(a, c) == doctest::Approx(acc.real() / nm).epsilon(1e-12));
    }
  }
}

TEST_CASE("paper-literal mode through mel_feature") {
  FeatureConfig cfg = preset("D");
  cfg.mode = TransformMode::PaperLiteral;
  const MelFeatureMatrix out = extract_features(testkit::synthetic_chirp(), cfg);
  CHECK(out.transform_mode == TransformMode::PaperLiteral);
  CHECK(out.values.rows() == 40);
  CHECK(out.values.allFinite());
  cfg.mode = TransformMode::LogMel;
  const MelFeatureMatrix log = extract_features(testkit::synthetic_chirp(), cfg);
  CHECK((out.values - paper_literal_transform(log.values)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("mel_feature rejects mismatched inputs") {
  const FeatureConfig a = preset("A");
  const FeatureConfig b = preset("B");
  const MelFilterbank fb_a = build_mel_filterbank(a, 16000.0);
  CHECK(error_category([&] { mel_feature(constant_spectrogram(b, 1.0, 2), fb_a); }) ==
        ErrorCategory::InvalidArgument);
  SpectrogramMatrix wrong_rate = constant_spectrogram(a, 1.0, 2);
  wrong_rate.sample_rate = 8000.0;
  CHECK(error_category([&] { mel_feature(wrong_rate, fb_a); }) == ErrorCategory::InvalidArgument);
}

TEST_CASE("chirp features match the stored reference matrices") {
  const AudioBuffer x = testkit::synthetic_chirp();
  for (const auto& c : golden::kCases) {
    const Eigen::MatrixXd expected = golden::read_csv(std::string(MTMEL_GOLDEN_DIR) + "/" + c.file);
    const MelFeatureMatrix got = extract_features(x, golden::config_for(c));
    CAPTURE(c.file);
    REQUIRE(got.values.rows() == expected.rows());
    REQUIRE(got.values.cols() == expected.cols());
    CHECK((got.values - expected).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
