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


#ifndef MTMEL_TESTS_TEST_SUPPORT_HPP
#define MTMEL_TESTS_TEST_SUPPORT_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <doctest.h>

#include "mtmel/error.hpp"

namespace mtmel::test {

// Runs fn and returns the category of the mtmel::Error it throws.
inline ErrorCategory error_category(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.category();
  }
  FAIL("expected mtmel::Error");
  return ErrorCategory::InvalidArgument;
}

inline std::string error_message(const std::function<void()>& fn) {
  std::string message;
  error_category(fn, &message);
  return message;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// max |a - b| / max(|b|, floor * max|b|)
inline double max_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            double floor = 1e-12) {
  const double peak = b.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      const double denom = std::max(std::abs(b(i, j)), floor * peak);
      if (denom == 0.0) {
        worst = std::max(worst, std::abs(a(i, j)));
      } else {
        worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
      }
    }
  }
  return worst;
}

}  // namespace mtmel::test

#endif  // MTMEL_TESTS_TEST_SUPPORT_HPP
