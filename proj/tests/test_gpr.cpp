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
#include <random>

#include "adap/error.hpp"
#include "adap/gpr.hpp"
#include "doctest.h"

using namespace adap;

namespace {

GprConfig Fixed(double length_scale) {
  GprConfig c;
  c.length_scale = length_scale;
  c.optimize = false;
  return c;
}

}  // namespace

TEST_CASE("kernel diagonal equals the amplitude") {
  Eigen::VectorXd a(2);
  a << 0.3, -0.7;
  CHECK(GprModel::Kernel(a, a, 1.0, 0.4) == 1.0);
  CHECK(GprModel::Kernel(a, a, 2.5, 0.4) == 2.5);
}

TEST_CASE("single point is reproduced") {
  Eigen::MatrixXd x(1, 2), y(1, 1);
  x << 0.4, 0.1;
  y << 0.7;
  const GprModel m = GprModel::Fit(x, y);
  CHECK(m.Predict(x.row(0).transpose()).mean[0] ==
        doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("two-point posterior mean in closed form") {
  Eigen::MatrixXd x(2, 1), y(2, 1);
  x << 0.0, 1.0;
  y << 1.0, 3.0;
  const double ell = 0.8, a = 1e-6;
  const GprModel m = GprModel::Fit(x, y, Fixed(ell));
  // K = [[1 + a, r], [r, 1 + a]], k* = [s, s] at the midpoint.
  const double r = std::exp(-1.0 / (2 * ell * ell));
  const double s = std::exp(-0.25 / (2 * ell * ell));
  const double det = (1 + a) * (1 + a) - r * r;
  const double w0 = ((1 + a) * 1.0 - r * 3.0) / det;
  const double w1 = (-r * 1.0 + (1 + a) * 3.0) / det;
  Eigen::VectorXd q(1);
  q << 0.5;
  const GprModel::Prediction p = m.Predict(q);
  CHECK(std::abs(p.mean[0] - s * (w0 + w1)) <= 1e-9);
  const double var = 1.0 - (s * s * (1 + a) * 2 - 2 * s * s * r) / det;
  CHECK(std::abs(p.std[0] - std::sqrt(var)) <= 1e-9);
}

TEST_CASE("interpolation, far field and variance") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(6, 2), y(6, 2);
  for (int i = 0; i < 6; ++i) {
    x.row(i) << 0.7 * i + 0.1 * u(rng), 0.5 * u(rng);
    y.row(i) << u(rng), u(rng);
  }
  const GprModel m = GprModel::Fit(x, y);
  for (int k = 0; k < 2; ++k) {
    CHECK(m.length_scale(k) >= 0.05);
    CHECK(m.length_scale(k) <= 5.0);
    CHECK(std::isfinite(m.log_marginal_likelihood(k)));
  }
  for (int i = 0; i < 6; ++i) {
    const GprModel::Prediction p = m.Predict(x.row(i).transpose());
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(p.mean[k] - y(i, k)) <= 1e-3);
      CHECK(p.std[k] * p.std[k] <= 2e-6 + 1e-9);
    }
  }
  Eigen::VectorXd far(2);
  far << 1000.0, -1000.0;
  const GprModel::Prediction p = m.Predict(far);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(p.mean[k]) <= 1e-3);
    CHECK(std::abs(p.std[k] - 1.0) <= 1e-3);
  }
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd q(2);
    q << 4 * u(rng), 4 * u(rng);
    const GprModel::Prediction pq = m.Predict(q);
    CHECK(pq.std.minCoeff() >= 0.0);
  }
}

TEST_CASE("conflicting duplicates resolve to the mean") {
  Eigen::MatrixXd x(3, 1), y(3, 1);
  x << 0.2, 0.2, 3.0;
  y << 1.0, 2.0, 0.0;
  const GprModel m = GprModel::Fit(x, y, Fixed(0.5));
  Eigen::VectorXd q(1);
  q << 0.2;
  CHECK(m.Predict(q).mean[0] == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("log marginal likelihood is maximized") {
  Eigen::MatrixXd x(6, 2), y(6, 1);
  for (int i = 0; i < 6; ++i) {
    x.row(i) << 0.1 * i, 0.05 * (i % 3);
    y(i, 0) = std::sin(3.0 * x(i, 0)) + x(i, 1);
  }
  const GprModel m = GprModel::Fit(x, y);
  const double best = m.log_marginal_likelihood(0);
  for (double ell : {0.05, 0.1, 0.3, 1.0, 2.0, 5.0}) {
    CHECK(GprModel::LogMarginalLikelihood(x, y.col(0), ell, m.config()) <=
          best + 1e-6);
  }
}

TEST_CASE("bad shapes are rejected") {
  CHECK_THROWS_AS(GprModel::Fit(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 1)), Error);
  CHECK_THROWS_AS(GprModel::Fit(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 1)),
                  Error);
}
