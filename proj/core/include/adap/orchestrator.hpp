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

#ifndef ADAP_ORCHESTRATOR_HPP_
#define ADAP_ORCHESTRATOR_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adap/adapter.hpp"
#include "adap/baselines.hpp"
#include "adap/config.hpp"
#include "adap/envs.hpp"
#include "adap/perception.hpp"
#include "adap/planner.hpp"

namespace adap {

// Base throwing motion for a task as control points (control_points x J).
// The first two rows and the last two rows coincide so the swing starts and
// ends at rest.
FrameMatrix BaseControlPoints(TaskKind task, int control_points = 8);

struct PriorSet {
  std::vector<ActionPlan> plans;
  std::vector<ResultVector> results;  // true rollout results
  std::vector<int> offsets;           // timing jitter per prior (frames)
  int candidates_tried = 0;
};

// Samples candidate_factor * n perturbed spline candidates and keeps n whose
// results are spread at least min_separation apart, preferring candidates
// that land near the goal area. Throws kInsufficientDiversity.
PriorSet GeneratePriors(const EnvModel& env, const ExperimentConfig& cfg,
                        std::uint64_t seed);

// D_e = {(A_i, P(rollout(A_i)))}.
LabeledDemoSet BuildDemoSet(const PriorSet& priors, const PlanShape& shape,
                            Perceptron& perceptron);

std::uint64_t PlanHash(const ActionPlan& plan);

struct RoundRecord {
  int round = 0;  // 1-based
  std::uint64_t sample_seed = 0;
  ConditionVector condition = ConditionVector::Zero();
  std::uint64_t plan_hash = 0;
  // Absent when the rollout failed (degenerate motion, no impact).
  std::optional<ResultVector> result;
  std::optional<ErrorVector> true_error;
  std::optional<ErrorVector> perceived_error;
  std::string status;  // "success", "miss" or the rollout error name
};

struct EpisodeOutcome {
  int goal_index = 0;
  GoalVector goal = GoalVector::Zero();
  GoalVector perceived_goal = GoalVector::Zero();
  std::vector<RoundRecord> rounds;
  std::optional<int> success_round;
  bool aborted = false;
  int stage1_trials = 0;

  std::optional<int> total_trials() const {
    if (!success_round) return std::nullopt;
    return stage1_trials + *success_round;
  }
};

nlohmann::json EpisodeToJson(const EpisodeOutcome& e);
EpisodeOutcome EpisodeFromJson(const nlohmann::json& j);

// Produces the plan for a proposed condition in a given round.
using PlanFn = std::function<ActionPlan(const ConditionVector& c, int round,
                                        std::uint64_t* seed_used)>;
// Perceived error for a rollout result; may throw kAborted.
using PerceiveFn = std::function<ErrorVector(const ResultVector& result,
                                             const GoalVector& goal,
                                             int round)>;

struct Stage2Options {
  int max_rounds = 10;
  double success_threshold = 0.03;
  PerceptionGrid grid;
  // When false the goal estimate is the goal itself (oracle harnesses).
  bool quantize_goal = true;
};

// One goal-adaptation episode. The adapter is taken by value: each episode
// owns its D_M tail.
EpisodeOutcome RunStage2(const EnvModel& env, const PlanFn& plan,
                         AdapterState adapter, const GoalVector& goal,
                         const PerceiveFn& perceive,
                         const Stage2Options& options);

// Same loop against an arbitrary rollout (test harnesses, oracles).
using RolloutFn = std::function<ResultVector(const ActionPlan&)>;
EpisodeOutcome RunStage2(const RolloutFn& rollout, const PlanFn& plan,
                         AdapterState adapter, const GoalVector& goal,
                         const PerceiveFn& perceive,
                         const Stage2Options& options);

// Goal grid: nx x ny cell centers of the configured rectangle, row-major in y.
std::vector<GoalVector> GoalGrid(const GoalGridConfig& cfg);

// Trained planners keyed by training-config hash, shared across methods and
// experiments that train on the same data.
class PlannerCache {
 public:
  std::shared_ptr<const DiffusionPlanner> Get(std::uint64_t key) const;
  void Put(std::uint64_t key, std::shared_ptr<const DiffusionPlanner> planner,
           TrainingLog log);
  const TrainingLog* Log(std::uint64_t key) const;

 private:
  mutable std::mutex mu_;
  std::map<std::uint64_t, std::shared_ptr<const DiffusionPlanner>> planners_;
  std::map<std::uint64_t, TrainingLog> logs_;
};

// Key for a planner trained on a given D_e with a given config.
std::uint64_t PlannerKey(const LabeledDemoSet& demos, const TrainConfig& cfg);

struct Stage1Result {
  PriorSet priors;
  LabeledDemoSet demos;
};

Stage1Result RunStage1Data(const ExperimentConfig& cfg);

struct MethodReport {
  Method method = Method::kAdap;
  std::vector<double> success_rate;  // cumulative, index r-1 for round r
  double mean_rounds_to_success = 0.0;  // over successful goals; NaN if none
  double mean_total_trials = 0.0;
  int prior_count = 0;
  std::optional<std::uint64_t> planner_key;
  TrainingLog training;
  std::vector<EpisodeOutcome> episodes;
};

struct ExperimentReport {
  ExperimentConfig config;
  LabeledDemoSet demos;
  std::vector<MethodReport> methods;

  const MethodReport* Find(Method m) const;
};

struct ExperimentHooks {
  // Called after each planner is trained (or taken from the cache).
  std::function<void(std::uint64_t key, const DiffusionPlanner&)> on_planner;
  std::function<void(const std::string&)> log;
};

ExperimentReport RunExperiment(const ExperimentConfig& cfg,
                               PlannerCache* cache = nullptr,
                               const ExperimentHooks& hooks = {});

// Plan source for a method. `planner` is required for diffusion methods;
// the goal index only matters for the stochastic sampler.
PlanFn MakePlanFn(const ExperimentConfig& cfg, Method method,
                  const LabeledDemoSet& demos,
                  std::shared_ptr<const DiffusionPlanner> planner,
                  int goal_index = 0);

// Stage-2 perception for one episode following cfg.perception (the
// interactive mode is wired by the CLI).
PerceiveFn MakePerceiveFn(const ExperimentConfig& cfg, int goal_index);

// Cumulative success rate at each round 1..max_rounds.
std::vector<double> SuccessCurve(const std::vector<EpisodeOutcome>& episodes,
                                 int max_rounds);

}  // namespace adap

#endif  // ADAP_ORCHESTRATOR_HPP_
