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

#include <benchmark/benchmark.h>

#include <random>

#include "adap/bspline.hpp"
#include "adap/denoiser.hpp"
#include "adap/envs.hpp"
#include "adap/gpr.hpp"
#include "adap/orchestrator.hpp"
#include "adap/perception.hpp"
#include "adap/planner.hpp"

using namespace adap;

namespace {

ActionPlan BaseThrow() {
  return SampleSplinePlan(BaseControlPoints(TaskKind::kProjectile, 8), 140, 30,
                          110, 0.02);
}

void BM_RolloutProjectile(benchmark::State& state) {
  const EnvModel env = EnvModel::Projectile();
  const ActionPlan plan = BaseThrow();
  for (auto _ : state) benchmark::DoNotOptimize(Rollout(env, plan));
}
BENCHMARK(BM_RolloutProjectile);

void BM_RolloutPendulum(benchmark::State& state) {
  const EnvModel env = EnvModel::Pendulum();
  const ActionPlan plan = BaseThrow();
  for (auto _ : state) benchmark::DoNotOptimize(Rollout(env, plan));
}
BENCHMARK(BM_RolloutPendulum);

struct DenoiserInputs {
  Denoiser net;
  Denoiser::Batch x, cond, target;
  std::vector<int> t;

  explicit DenoiserInputs(int batch) : net(DenoiserShape{}) {
    net.Initialize(1);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    auto fill = [&](Denoiser::Batch& m, int rows) {
      m.resize(rows, batch);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    };
    const DenoiserShape& s = net.shape();
    fill(x, s.plan_dim);
    fill(cond, s.cond_dim);
    fill(target, s.plan_dim);
    std::uniform_int_distribution<int> step(1, 100);
    for (int i = 0; i < batch; ++i) t.push_back(step(rng));
  }
};

void BM_DenoiserForward(benchmark::State& state) {
  const DenoiserInputs in(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(in.net.Forward(in.x, in.t, in.cond));
}
BENCHMARK(BM_DenoiserForward)->Arg(1)->Arg(256);

void BM_DenoiserLossAndGradient(benchmark::State& state) {
  const DenoiserInputs in(static_cast<int>(state.range(0)));
  Eigen::VectorXd grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        in.net.LossAndGradient(in.x, in.t, in.cond, in.target, &grad));
  }
}
BENCHMARK(BM_DenoiserLossAndGradient)->Arg(256);

void BM_PlannerSample(benchmark::State& state) {
  const ExperimentConfig cfg = DefaultConfig(TaskKind::kProjectile);
  const Stage1Result s = RunStage1Data(cfg);
  TrainConfig tc = TrainConfigFor(cfg, Method::kAdap);
  tc.epochs = 1;
  const DiffusionPlanner planner =
      DiffusionPlanner::Train(s.demos, MakeEnv(cfg).arm.limits, tc);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(planner.Sample(ConditionVector(1.05, 0.0), seed++));
  }
}
BENCHMARK(BM_PlannerSample)->Unit(benchmark::kMillisecond);

void BM_GprFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd x(n, 2), y(n, 2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = 0.1 * u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(GprModel::Fit(x, y, GprConfig{}));
}
BENCHMARK(BM_GprFit)->Arg(6)->Arg(8);

void BM_Perceive(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const ErrorVector e(u(rng), u(rng));
  for (auto _ : state) benchmark::DoNotOptimize(Perceive(e));
}
BENCHMARK(BM_Perceive);

}  // namespace

BENCHMARK_MAIN();
