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
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mtmel/bench.hpp"
#include "mtmel/config.hpp"
#include "test_support.hpp"

using namespace mtmel;
using mtmel::test::error_category;
using mtmel::test::error_message;

namespace {

std::vector<TimingRecord> points(std::vector<std::pair<Index, double>> xy) {
  std::vector<TimingRecord> out;
  for (auto [k, ms] : xy) {
    TimingRecord r;
    r.k = k;
    r.mean_ms = ms;
    r.reps = 10;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("collinear points fit exactly") {
  const LinearFit f = fit_linear(points({{3, 3.0}, {5, 5.0}, {7, 7.0}}));
  CHECK(std::abs(f.slope - 1.0) <= 1e-12);
  CHECK(std::abs(f.intercept) <= 1e-12);
  CHECK(std::abs(f.r_squared - 1.0) <= 1e-12);

  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double v : x) y.push_back(0.25 + 1.75 * v);
  const LinearFit g = fit_linear(x, y);
  CHECK(std::abs(g.slope - 1.75) <= 1e-12);
  CHECK(std::abs(g.intercept - 0.25) <= 1e-12);
  CHECK(std::abs(g.r_squared - 1.0) <= 1e-12);
}

TEST_CASE("constant response fits with zero slope and zero r squared") {
  const LinearFit f = fit_linear(points({{3, 1.0}, {5, 1.0}, {7, 1.0}}));
  CHECK(f.slope == 0.0);
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == 0.0);
}

TEST_CASE("noisy fit matches hand least squares") {
  // x = 1..4, y = 1, 3, 2, 5: sxx = 5, sxy = 5.5, slope 1.1, intercept 0, r^2 = 30.25/(5*8.75)
  const std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 5};
  const LinearFit f = fit_linear(x, y);
  CHECK(f.slope == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(std::abs(f.intercept) <= 1e-14);
  CHECK(f.r_squared == doctest::Approx(30.25 / 43.75).epsilon(1e-14));
  CHECK(f.r_squared >= 0.0);
  CHECK(f.r_squared <= 1.0);
}

TEST_CASE("fit needs three distinct k") {
  CHECK(error_message([] { fit_linear(points({{5, 1.0}, {5, 2.0}, {5, 3.0}})); }) ==
        "need >=3 distinct K for fit");
  CHECK(error_category([] { fit_linear(points({{3, 1.0}, {5, 2.0}})); }) == ErrorCategory::InvalidArgument);
}

TEST_CASE("spearman rank correlation") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  CHECK(spearman_rank_correlation(x, std::vector<double>{2, 4, 8, 16, 32}) == doctest::Approx(1.0));
  CHECK(spearman_rank_correlation(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  // one swap: 1 - 6*2/(5*24) = 0.9
  CHECK(spearman_rank_correlation(x, std::vector<double>{1, 3, 2, 4, 5}) == doctest::Approx(0.9));
  // ties take the mean rank
  CHECK(spearman_rank_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 2}) ==
        doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("reps below minimum is rejected") {
  const std::vector<Index> ks = {5};
  FeatureConfig cfg = preset("A");
  cfg.window = {WindowFamily::SwceOriginal};
  BenchOptions opt;
  opt.reps = 1;
  const std::string msg = error_message([&] { time_feature_extraction(benchmark_signal(), cfg, ks, opt); });
  CHECK(msg.find("reps below minimum") != std::string::npos);
}

TEST_CASE("invalid k is rejected") {
  const std::vector<Index> ks = {13};
  FeatureConfig cfg = preset("A");
  cfg.window = {WindowFamily::Hermite};
  BenchOptions opt;
  opt.reps = 10;
  CHECK(error_category([&] { time_feature_extraction(benchmark_signal(), cfg, ks, opt); }) ==
        ErrorCategory::InvalidArgument);
}

TEST_CASE("repeated single-k runs give well-formed records") {
  const std::vector<Index> ks = {5};
  FeatureConfig cfg = preset("A");
  cfg.window = {WindowFamily::SwceOriginal};
  BenchOptions opt;
  opt.reps = 10;
  for (int run = 0; run < 2; ++run) {
    const auto recs = time_feature_extraction(benchmark_signal(), cfg, ks, opt);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].k == 5);
    CHECK(recs[0].reps == 10);
    CHECK(recs[0].mean_ms > 0.0);
    CHECK(std::isfinite(recs[0].std_ms));
    CHECK(recs[0].std_ms >= 0.0);
    CHECK(recs[0].setup_name == "A");
    CHECK(recs[0].window_kind == WindowKind{WindowFamily::SwceOriginal});
  }
}

TEST_CASE("hermite cost rises with k") {
  std::vector<Index> ks(8);
  std::iota(ks.begin(), ks.end(), Index{3});
  FeatureConfig cfg = preset("A");
  cfg.window = {WindowFamily::Hermite};
  BenchOptions opt;
  opt.reps = 30;
  const auto recs = time_feature_extraction(benchmark_signal(), cfg, ks, opt);
  REQUIRE(recs.size() == 8);
  std::vector<double> x, y;
  for (const auto& r : recs) {
    x.push_back(static_cast<double>(r.k));
    y.push_back(r.mean_ms);
  }
  CHECK(spearman_rank_correlation(x, y) >= 0.8);
}

TEST_CASE("bench csv layout") {
  auto recs = points({{3, 1.5}, {4, 2.0}});
  for (auto& r : recs) {
    r.window_kind = {WindowFamily::SwceModified};
    r.setup_name = "C";
    r.std_ms = 0.125;
  }
  std::ostringstream out;
  write_bench_csv(out, recs);
  CHECK(out.str() ==
        "window,setup,k,mean_ms,std_ms,reps\n"
        "swce-modified,C,3,1.5,0.125,10\n"
        "swce-modified,C,4,2,0.125,10\n");
  const std::string line = fit_summary_line(LinearFit{1.0, 0.5, 0.75});
  CHECK(line.rfind("# fit:", 0) == 0);
  CHECK(line.find("r_squared = 0.75") != std::string::npos);
  BenchOptions warm;
  warm.amortize_tapers = true;
  CHECK(timed_region_note(warm) != timed_region_note(BenchOptions{}));
}
