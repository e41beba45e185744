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


#include <random>

#include "adap/perception.hpp"
#include "doctest.h"

using namespace adap;

TEST_CASE("perceive examples") {
  CHECK(Perceive({0, 0}) == ErrorVector(0, 0));
  const ErrorVector a = Perceive({0.007, -0.032});
  CHECK(a.x() == doctest::Approx(0.01));
  CHECK(a.y() == doctest::Approx(-0.03));
  const ErrorVector b = Perceive({0.17, 0.12});
  CHECK(b.x() == doctest::Approx(0.15));
  CHECK(b.y() == doctest::Approx(0.10));
  Perceptron p;
  const ErrorVector r = p.PerceiveResult({0.31, 0.18}, {0, 0});
  CHECK(r.x() == doctest::Approx(0.30));
  CHECK(r.y() == doctest::Approx(0.20));
  const ErrorVector d = p.PerceiveResult({0.31, 0.18}, {0.30, 0.20});
  CHECK(d.x() == doctest::Approx(0.01));
  CHECK(d.y() == doctest::Approx(-0.02));
  CHECK(p.PerceiveResult({0.4, -0.2}, {0.4, -0.2}) == ErrorVector(0, 0));
}

TEST_CASE("ties resolve toward zero") {
  const PerceptionGrid g;
  CHECK(g.Snap(0.005) == 0.0);
  CHECK(g.Snap(-0.005) == 0.0);
  CHECK(g.Snap(0.075) == doctest::Approx(0.05));
  CHECK(g.Snap(-0.125) == doctest::Approx(-0.10));
}

TEST_CASE("perceptron axioms over random errors") {
  const PerceptionGrid g;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> small(-0.005, 0.005);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const ErrorVector p1 = Perceive({a, b}, g);
    const ErrorVector p2 = Perceive({a, c}, g);
    // Independence.
    CHECK(p1.x() == p2.x());
    // Monotonicity.
    const double lo = std::min(b, c), hi = std::max(b, c);
    CHECK(g.Snap(lo) <= g.Snap(hi));
    // Bounded by half the local grid gap (at most 2.5 cm).
    CHECK(std::abs(p1.x() - a) <= 0.025 + 1e-12);
    // Membership and idempotence.
    CHECK(g.Contains(p1.x()));
    CHECK(g.Contains(p1.y()));
    CHECK(Perceive(p1, g) == p1);
    // Zero limit.
    const double z = g.Snap(small(rng));
    CHECK((z == 0.0 || std::abs(std::abs(z) - 0.01) < 1e-15));
  }
}

TEST_CASE("grid membership") {
  const PerceptionGrid g;
  for (double v : {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.35, -0.04, -1.5}) {
    CHECK(g.Contains(v));
  }
  for (double v : {0.005, 0.045, 0.06, 0.12}) CHECK_FALSE(g.Contains(v));
}

TEST_CASE("stochastic perceptron is seeded and stays on the grid") {
  Perceptron a = Perceptron::Stochastic(9, 0.1);
  Perceptron b = Perceptron::Stochastic(9, 0.1);
  const PerceptionGrid g;
  for (int i = 0; i < 200; ++i) {
    const ErrorVector e(0.01 * i - 1.0, 0.3 - 0.005 * i);
    const ErrorVector pa = a.Perceive(e);
    CHECK(pa == b.Perceive(e));
    CHECK(g.Contains(pa.x()));
    // A 10% scale moves a value by at most one coarse step plus rounding.
    CHECK(std::abs(pa.x() - e.x()) <= 0.1 * std::abs(e.x()) + 0.025 + 1e-12);
  }
}
