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

#ifndef ADAP_PLANNER_HPP_
#define ADAP_PLANNER_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adap/denoiser.hpp"
#include "adap/domain.hpp"
#include "adap/schedule.hpp"

namespace adap {

struct TrainConfig {
  int batch_size = 256;
  int epochs = 3000;
  double learning_rate = 5e-4;
  double beta1 = 0.95;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 1e-6;
  int warmup_steps = 500;

  double ema_power = 0.75;
  double ema_inv_gamma = 1.0;
  double ema_max = 0.9999;
  double ema_min = 0.0;
  int ema_update_after_step = 0;

  bool timeline_shift = true;
  int shift_steps_upperbound = 10;

  int timesteps = 100;
  BetaSchedule beta_schedule = BetaSchedule::kSquaredCosineCapV2;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  bool clip_sample = true;

  int hidden = 512;
  int time_embed_dim = 32;
  int cond_embed_dim = 32;

  std::uint64_t seed = 0;
};

// Stable 64-bit digest of every field that affects trained weights.
std::uint64_t ConfigHash(const TrainConfig& cfg);

// Algorithm-2 timeline shift with an explicit amount. Positive `steps`
// delays the motion (pads the front with frame 0); negative advances it
// (pads the back with the last frame).
FrameMatrix ShiftFrames(const FrameMatrix& frames, int steps);

// Random shift: magnitude uniform in [1, upperbound], direction by coin.
ActionPlan TimelineShift(const ActionPlan& plan, std::mt19937_64& rng,
                         int upperbound);

// Linear-warmup-then-constant learning rate for optimizer step `step`
// (0-based).
double LearningRateAt(const TrainConfig& cfg, long step);

// EMA decay used after `optimization_step` prior updates.
double EmaDecay(const TrainConfig& cfg, long optimization_step);

// Decoupled-weight-decay Adam.
class AdamW {
 public:
  AdamW() = default;
  explicit AdamW(Eigen::Index size)
      : m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {}

  void Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr,
            const TrainConfig& cfg);
  long steps() const { return steps_; }

 private:
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long steps_ = 0;
};

struct TrainingLog {
  std::vector<double> epoch_loss;
};

// The conditional action planner pi: condition -> ActionPlan.
class DiffusionPlanner {
 public:
  DiffusionPlanner() = default;

  // Stage-1 training on D_e. Deterministic given cfg.seed.
  static DiffusionPlanner Train(const LabeledDemoSet& demos,
                                const JointLimits& limits,
                                const TrainConfig& cfg,
                                TrainingLog* log = nullptr);

  // Ancestral DDPM sampling with EMA weights; output clamped to limits.
  ActionPlan Sample(const ConditionVector& c, std::mt19937_64& rng) const;
  ActionPlan Sample(const ConditionVector& c, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    return Sample(c, rng);
  }

  bool trained() const { return trained_; }
  const PlanShape& shape() const { return shape_; }
  const JointLimits& limits() const { return limits_; }
  const TrainConfig& config() const { return cfg_; }
  const NoiseSchedule& schedule() const { return schedule_; }
  const Denoiser& denoiser() const { return net_; }
  const Eigen::VectorXd& ema_params() const { return ema_; }
  const PlanNormalizer& plan_normalizer() const { return plan_norm_; }
  const RangeNormalizer& condition_normalizer() const { return cond_norm_; }

  // Rebuilds a trained planner from persisted parts (see checkpoint.hpp).
  static DiffusionPlanner FromParts(PlanShape shape, JointLimits limits,
                                    TrainConfig cfg, PlanNormalizer plan_norm,
                                    RangeNormalizer cond_norm,
                                    Eigen::VectorXd train_params,
                                    Eigen::VectorXd ema_params);

  static DenoiserShape ShapeFor(const PlanShape& plan, const TrainConfig& cfg);

 private:
  PlanShape shape_;
  JointLimits limits_;
  TrainConfig cfg_;
  NoiseSchedule schedule_;
  Denoiser net_;
  Eigen::VectorXd ema_;
  PlanNormalizer plan_norm_;
  RangeNormalizer cond_norm_;
  bool trained_ = false;
};

}  // namespace adap

#endif  // ADAP_PLANNER_HPP_
