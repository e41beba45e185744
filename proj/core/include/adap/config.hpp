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

#ifndef ADAP_CONFIG_HPP_
#define ADAP_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "adap/adapter.hpp"
#include "adap/baselines.hpp"
#include "adap/envs.hpp"
#include "adap/planner.hpp"

namespace adap {

struct PriorConfig {
  int count = 6;
  int candidate_factor = 5;
  double sigma = 0.15;            // rad, on interior control points
  double min_separation = 0.08;   // m, between selected results
  int control_points = 8;
  int window_start = 30;
  int window_end = 110;
  int timing_jitter = 8;          // frames, per-prior motion start offset
  // Candidates landing farther than this outside the goal area are only
  // used when too few land inside it. Negative disables the filter.
  double area_margin = 0.2;       // m
};

struct GoalGridConfig {
  PlaneVector center{1.0, 0.0};
  PlaneVector size{0.4, 0.5};
  int nx = 10;
  int ny = 10;
};

enum class PerceptionMode { kGrid, kStochastic, kInteractive };
// Stage-2 sampling noise: one seed for every round of an episode, a seed
// per round index (seed ^ round), or a fresh seed per goal and round.
enum class SamplerMode { kFixedPerEpisode, kFixedPerRound, kStochastic };

struct ExperimentConfig {
  TaskKind task = TaskKind::kProjectile;
  std::vector<Method> methods{Method::kAdap, Method::kAdapNoShift,
                              Method::kAdapNoForget, Method::kInn,
                              Method::kInnAligned};
  std::uint64_t seed = 0;
  int horizon = 140;
  double dt = 0.02;

  // Environment
  double mu = 0.20;
  double string_length = 0.40;
  double perturbation = 0.0;        // applied to the stage-2 environment
  std::uint64_t perturbation_seed = 1;

  PerceptionMode perception = PerceptionMode::kGrid;
  double perception_spread = 0.1;

  TrainConfig train;
  PriorConfig priors;
  GoalGridConfig goals;
  AdapterConfig adapter;
  SamplerMode sampler = SamplerMode::kFixedPerRound;

  int max_rounds = 10;
  double success_threshold = 0.03;
  int jobs = 1;
  std::string out_dir = "out";
};

// Default config for a task: horizons, goal area and base motion follow
// the task.
ExperimentConfig DefaultConfig(TaskKind task = TaskKind::kProjectile);

TaskKind ParseTask(std::string_view name);

// Defaults filled in, unknown keys rejected. Throws kParseError on bad
// JSON and kSchemaError (message carries the key path) on bad content.
ExperimentConfig ParseConfig(const nlohmann::json& j);
ExperimentConfig ParseConfigText(const std::string& text);
// Only the "train" object, checked against the plan horizon.
TrainConfig ParseTrainConfig(const nlohmann::json& train, std::uint64_t seed,
                             int horizon);
ExperimentConfig ParseConfigFile(const std::string& path);

nlohmann::json ConfigToJson(const ExperimentConfig& cfg);

// Stage-1 training environment (never perturbed) and the stage-2 one.
EnvModel MakeEnv(const ExperimentConfig& cfg);
EnvModel MakeStage2Env(const ExperimentConfig& cfg);
PlanShape MakePlanShape(const ExperimentConfig& cfg);

// Training config specialized for a method (ablation switches applied).
TrainConfig TrainConfigFor(const ExperimentConfig& cfg, Method method);
AdapterConfig AdapterConfigFor(const ExperimentConfig& cfg, Method method);

}  // namespace adap

#endif  // ADAP_CONFIG_HPP_
