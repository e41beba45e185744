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
#include <limits>

#include "adap/domain.hpp"
#include "adap/envs.hpp"
#include "adap/error.hpp"
#include "doctest.h"

using namespace adap;

namespace {

ActionPlan Plan(int h, int j, double v = 0.1) {
  return {FrameMatrix::Constant(h, j, v), 0.02};
}

ErrorCode CodeOf(const ActionPlan& p, const PlanShape& s) {
  try {
    ValidatePlan(p, s, ArmModel::DefaultLimits());
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("plan unexpectedly valid");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("plan validation") {
  const PlanShape s{10, 4, 0.02};
  const JointLimits lim = ArmModel::DefaultLimits();
  CHECK_NOTHROW(ValidatePlan(Plan(10, 4), s, lim));
  CHECK(CodeOf(Plan(9, 4), s) == ErrorCode::kHorizonMismatch);
  CHECK(CodeOf(Plan(10, 3), s) == ErrorCode::kJointCountMismatch);
  ActionPlan p = Plan(10, 4);
  p.frames(4, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK(CodeOf(p, s) == ErrorCode::kNonFinite);
  p = Plan(10, 4);
  p.frames(6, 3) = 9.0;
  CHECK(CodeOf(p, s) == ErrorCode::kJointLimitViolation);
  const std::string msg = CheckPlan(p, s, lim);
  CHECK(msg.find("frame 6") != std::string::npos);
  CHECK(msg.find("joint 3") != std::string::npos);
  const ActionPlan c = ClampToLimits(p, lim);
  CHECK(c.frames(6, 3) == lim.upper[3]);
  CHECK(CheckPlan(c, s, lim).empty());
}

TEST_CASE("range normalizer") {
  FrameMatrix rows(3, 2);
  rows << 0.0, 5.0,
          2.0, 5.0,
          1.0, 5.0;
  const RangeNormalizer n = RangeNormalizer::Fit(rows);
  const FrameMatrix z = n.NormalizeRows(rows);
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  CHECK(z(1, 0) == doctest::Approx(1.0));
  CHECK(z(2, 0) == doctest::Approx(0.0));
  // A constant column maps to the middle instead of dividing by zero.
  CHECK(std::isfinite(z(0, 1)));
  CHECK(n.DenormalizeRows(z).isApprox(rows, 1e-12));
  Eigen::VectorXd v(2);
  v << 1.5, 5.0;
  CHECK(n.Denormalize(n.Normalize(v)).isApprox(v, 1e-12));
}

TEST_CASE("plan normalizer is fit per joint over every frame") {
  LabeledDemoSet d;
  d.shape = {3, 2, 0.02};
  d.entries.push_back({{FrameMatrix::Constant(3, 2, -1.0), 0.02}, {0, 0}});
  d.entries.push_back({{FrameMatrix::Constant(3, 2, 3.0), 0.02}, {1, 0}});
  const PlanNormalizer n = FitPlanNormalizer(d);
  CHECK(n.min()[0] == -1.0);
  CHECK(n.max()[1] == 3.0);
  const ActionPlan z = NormalizePlan(d.entries[1].plan, n);
  CHECK((z.frames.array() == 1.0).all());
  CHECK(DenormalizePlan(z, n).frames == d.entries[1].plan.frames);
}

TEST_CASE("json roundtrips") {
  LabeledDemoSet d;
  d.shape = {4, 2, 0.02};
  FrameMatrix f(4, 2);
  f << 0.1, 0.2, 0.3, 1.0 / 3.0, -0.5, 0.6, 0.7, 0.8;
  d.entries.push_back({{f, 0.02}, {0.35, -0.05}});
  const LabeledDemoSet back = DemoSetFromJson(nlohmann::json::parse(DemoSetToJson(d).dump()));
  REQUIRE(back.size() == 1);
  CHECK(back.shape == d.shape);
  CHECK(back.entries[0].plan.frames == f);
  CHECK(back.entries[0].result == d.entries[0].result);
  Eigen::VectorXd v(3);
  v << 1e-300, -2.5, 7.0 / 3.0;
  CHECK(VectorFromJson(nlohmann::json::parse(VectorToJson(v).dump())) == v);
}
