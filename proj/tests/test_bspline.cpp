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

#include "adap/bspline.hpp"
#include "doctest.h"

using namespace adap;

TEST_CASE("clamped spline hits its end control points") {
  FrameMatrix c(8, 2);
  for (int i = 0; i < 8; ++i) c.row(i) << i * i * 0.1, -0.2 * i;
  CHECK(EvaluateBSpline(c, 0.0).isApprox(c.row(0).transpose()));
  CHECK(EvaluateBSpline(c, 1.0).isApprox(c.row(7).transpose()));
}

TEST_CASE("constant control points give a constant curve") {
  const FrameMatrix c = FrameMatrix::Constant(8, 3, 0.7);
  for (double u = 0.0; u <= 1.0; u += 0.05) {
    CHECK((EvaluateBSpline(c, u).array() - 0.7).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("curve stays in the control-point hull") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  FrameMatrix c(8, 4);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = n01(rng);
  for (double u = 0.0; u <= 1.0; u += 0.01) {
    const Eigen::VectorXd v = EvaluateBSpline(c, u);
    for (int j = 0; j < 4; ++j) {
      CHECK(v[j] >= c.col(j).minCoeff() - 1e-12);
      CHECK(v[j] <= c.col(j).maxCoeff() + 1e-12);
    }
  }
}

TEST_CASE("sampled plan holds the ends outside the window") {
  FrameMatrix c(8, 4);
  for (int i = 0; i < 8; ++i) c.row(i).setConstant(0.1 * i);
  const ActionPlan p = SampleSplinePlan(c, 140, 30, 110, 0.02);
  CHECK(p.horizon() == 140);
  CHECK(p.joints() == 4);
  CHECK(p.dt == 0.02);
  for (int t = 0; t <= 30; ++t) CHECK(p.frames.row(t).isApprox(c.row(0)));
  for (int t = 110; t < 140; ++t) CHECK(p.frames.row(t).isApprox(c.row(7)));
  for (int t = 31; t < 110; ++t) CHECK(p.frames(t, 0) >= p.frames(t - 1, 0));
}
