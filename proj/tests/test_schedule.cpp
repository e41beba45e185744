// Copyright 2026 The ADAP Authors
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
#include <numbers>
#include <random>

#include "adap/schedule.hpp"
#include "doctest.h"

using namespace adap;

namespace {

double F(double t, double T) {
  const double c = std::cos((t / T + 0.008) / 1.008 * std::numbers::pi / 2);
  return c * c;
}

}  // namespace

TEST_CASE("squared-cosine schedule") {
  const NoiseSchedule s = NoiseSchedule::Make(100);
  REQUIRE(s.timesteps() == 100);
  double prod = 1.0;
  for (int t = 1; t <= 100; ++t) {
    const double beta = std::min(1.0 - F(t, 100) / F(t - 1, 100), 0.999);
    prod *= 1.0 - beta;
    CHECK(s.beta(t) == doctest::Approx(beta).epsilon(1e-12));
    CHECK(s.alpha_bar(t) == doctest::Approx(prod).epsilon(1e-10));
    CHECK(s.beta(t) > 0.0);
    CHECK(s.beta(t) <= NoiseSchedule::kMaxBeta);
    if (t > 1) CHECK(s.alpha_bar(t) < s.alpha_bar(t - 1));
  }
  CHECK(s.alpha_bar(1) >= 0.999);
  CHECK(s.alpha_bar(1) == doctest::Approx(F(1, 100) / F(0, 100)).epsilon(1e-12));
  CHECK(s.alpha_bar_prev(1) == 1.0);
  const double var = s.beta(50) * (1 - s.alpha_bar(49)) / (1 - s.alpha_bar(50));
  CHECK(s.posterior_variance(50) == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("linear schedule endpoints") {
  const NoiseSchedule s = NoiseSchedule::Make(10, BetaSchedule::kLinear, 1e-4, 0.02);
  CHECK(s.beta(1) == doctest::Approx(1e-4));
  CHECK(s.beta(10) == doctest::Approx(0.02));
  CHECK(ParseBetaSchedule("squaredcos_cap_v2") == BetaSchedule::kSquaredCosineCapV2);
  CHECK(ParseBetaSchedule("linear") == BetaSchedule::kLinear);
}

TEST_CASE("q_sample closed forms") {
  const NoiseSchedule s = NoiseSchedule::Make(100);
  Eigen::VectorXd x0(3), noise(3);
  x0 << 0.5, -1.0, 0.25;
  noise << 0.3, 0.1, -2.0;
  CHECK(QSample(s, x0, 40, Eigen::VectorXd::Zero(3)) ==
        std::sqrt(s.alpha_bar(40)) * x0);
  CHECK(QSample(s, Eigen::VectorXd::Zero(3), 100, noise)
            .isApprox(std::sqrt(1 - s.alpha_bar(100)) * noise, 1e-15));
  // Linear in (x0, noise).
  const Eigen::VectorXd lhs = QSample(s, 2 * x0 + x0, 30, 2 * noise + noise);
  const Eigen::VectorXd rhs = 3 * QSample(s, x0, 30, noise);
  CHECK(lhs.isApprox(rhs, 1e-14));
}

TEST_CASE("q_sample moments over 1e5 draws") {
  const NoiseSchedule s = NoiseSchedule::Make(100);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int draws = 100000;
  Eigen::VectorXd x0(draws);
  for (int i = 0; i < draws; ++i) x0[i] = u(rng);
  const double var_x0 = (x0.array() - x0.mean()).square().mean();
  for (int t : {1, 10, 50, 90, 100}) {
    Eigen::VectorXd noise(draws);
    for (int i = 0; i < draws; ++i) noise[i] = n01(rng);
    const Eigen::VectorXd xt = QSample(s, x0, t, noise);
    const double mean = xt.mean();
    const double var = (xt.array() - mean).square().mean();
    const double expect = s.alpha_bar(t) * var_x0 + (1 - s.alpha_bar(t));
    CHECK(std::abs(var - expect) <= 0.02 * expect);
    CHECK(std::abs(mean - std::sqrt(s.alpha_bar(t)) * x0.mean()) <= 0.02);
  }
}
