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

#include "adap/baselines.hpp"
#include "adap/envs.hpp"
#include "adap/error.hpp"
#include "adap/orchestrator.hpp"
#include "doctest.h"

using namespace adap;

namespace {

LabeledDemoSet Triangle() {
  LabeledDemoSet d;
  d.shape = {5, 4, 0.02};
  const double r[4][2] = {{0, 0}, {1, 0}, {0, 1}, {3, 3}};
  for (int i = 0; i < 4; ++i) {
    DemoEntry e;
    e.plan.frames = FrameMatrix::Constant(5, 4, 0.1 * (i + 1));
    e.plan.frames(2, 1) += 0.05 * i * i;
    e.result = ResultVector(r[i][0], r[i][1]);
    d.entries.push_back(e);
  }
  return d;
}

// Pure yaw swing whose tool speed peaks exactly at `peak`.
ActionPlan YawSwing(int peak, int horizon = 120) {
  ActionPlan a;
  a.frames = FrameMatrix::Zero(horizon, 4);
  for (int t = 0; t < horizon; ++t) {
    a.frames(t, 0) = 0.8 * std::tanh((t - peak) / 4.0);
    a.frames(t, 1) = 0.5;
  }
  return a;
}

LabeledDemoSet Swings(std::initializer_list<int> peaks) {
  LabeledDemoSet d;
  d.shape = {120, 4, 0.02};
  double x = 0.0;
  for (int p : peaks) d.entries.push_back({YawSwing(p), ResultVector(x += 0.1, 0)});
  return d;
}

double Weight(const InnWeights& w, int node) {
  for (int k = 0; k < 3; ++k) {
    if (w.neighbors[k] == node) return w.weights[k];
  }
  return 0.0;
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::kAdap, Method::kAdapNoShift, Method::kAdapNoForget,
                   Method::kInn, Method::kInnAligned}) {
    CHECK(ParseMethod(ToString(m)) == m);
  }
  CHECK(UsesDiffusion(Method::kAdapNoForget));
  CHECK_FALSE(UsesDiffusion(Method::kInnAligned));
  CHECK_THROWS_AS(ParseMethod("bc"), Error);
}

TEST_CASE("affine weights by hand") {
  const InnWeights w = SolveInnWeights({0.25, 0.25}, Triangle());
  CHECK_FALSE(w.fallback);
  CHECK(Weight(w, 0) == doctest::Approx(0.5));
  CHECK(Weight(w, 1) == doctest::Approx(0.25));
  CHECK(Weight(w, 2) == doctest::Approx(0.25));
}

TEST_CASE("interpolation nodes are exact") {
  const LabeledDemoSet d = Triangle();
  const InnPlanner p(d, ArmModel::DefaultLimits());
  for (int i = 0; i < 4; ++i) {
    const InnWeights w = SolveInnWeights(d.entries[i].result, d);
    CHECK(Weight(w, i) == doctest::Approx(1.0));
    CHECK(p.Plan(d.entries[i].result).frames.isApprox(d.entries[i].plan.frames, 1e-12));
  }
}

TEST_CASE("weights sum to one and plans are frame-wise affine") {
  const LabeledDemoSet d = Triangle();
  const InnPlanner p(d, ArmModel::DefaultLimits());
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int i = 0; i < 1000; ++i) {
    const ConditionVector c(u(rng), u(rng));
    const InnWeights w = SolveInnWeights(c, d);
    CHECK(std::abs(w.weights.sum() - 1.0) <= 1e-9);
    if (w.fallback) continue;
    FrameMatrix expect = FrameMatrix::Zero(5, 4);
    for (int k = 0; k < 3; ++k) expect += w.weights[k] * d.entries[w.neighbors[k]].plan.frames;
    expect = ClampToLimits({expect, 0.02}, ArmModel::DefaultLimits()).frames;
    CHECK(p.Plan(c).frames.isApprox(expect, 1e-12));
  }
}

TEST_CASE("collinear neighbours fall back to inverse distance") {
  LabeledDemoSet d = Triangle();
  d.entries[2].result = ResultVector(2, 0);
  d.entries[3].result = ResultVector(3, 0);
  const InnWeights w = SolveInnWeights({0.5, 0.5}, d);
  CHECK(w.fallback);
  CHECK(w.weights.minCoeff() >= 0.0);
  CHECK(std::abs(w.weights.sum() - 1.0) <= 1e-9);
}

TEST_CASE("alignment moves every peak to the median") {
  const ArmModel arm;
  const LabeledDemoSet d = Swings({50, 53, 56});
  for (int i = 0; i < 3; ++i) {
    CHECK(PeakSpeedFrame(ComputeToolPath(d.entries[i].plan, arm)) == 50 + 3 * i);
  }
  const LabeledDemoSet a = AlignDataset(d, arm);
  for (const DemoEntry& e : a.entries) {
    CHECK(PeakSpeedFrame(ComputeToolPath(e.plan, arm)) == 53);
  }
  CHECK(a.entries[1].plan.frames == d.entries[1].plan.frames);
  CHECK(a.entries[2].result == d.entries[2].result);
}

TEST_CASE("aligned sets are left alone") {
  const LabeledDemoSet d = Swings({60, 60, 60, 60});
  const LabeledDemoSet a = AlignDataset(d, ArmModel{});
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(a.entries[i].plan.frames == d.entries[i].plan.frames);
  }
}

TEST_CASE("alignment preserves prior rollouts") {
  const EnvModel env = EnvModel::Projectile();
  ExperimentConfig cfg;
  const PriorSet priors = GeneratePriors(env, cfg, 0);
  LabeledDemoSet d;
  d.shape = MakePlanShape(cfg);
  for (std::size_t i = 0; i < priors.plans.size(); ++i) {
    d.entries.push_back({priors.plans[i], priors.results[i]});
  }
  const LabeledDemoSet a = AlignDataset(d, env.arm);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK((Rollout(env, a.entries[i].plan) - priors.results[i]).norm() <= 0.02);
  }
}
