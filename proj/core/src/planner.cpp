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

#include "adap/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace adap {

std::uint64_t ConfigHash(const TrainConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << c.batch_size << '|' << c.epochs << '|' << c.learning_rate << '|'
     << c.beta1 << '|' << c.beta2 << '|' << c.adam_eps << '|'
     << c.weight_decay << '|' << c.warmup_steps << '|' << c.ema_power << '|'
     << c.ema_inv_gamma << '|' << c.ema_max << '|' << c.ema_min << '|'
     << c.ema_update_after_step << '|' << c.timeline_shift << '|'
     << c.shift_steps_upperbound << '|' << c.timesteps << '|'
     << ToString(c.beta_schedule) << '|' << c.beta_start << '|' << c.beta_end
     << '|' << c.clip_sample << '|' << c.hidden << '|' << c.time_embed_dim
     << '|' << c.cond_embed_dim << '|' << c.seed;
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

FrameMatrix ShiftFrames(const FrameMatrix& frames, int steps) {
  const auto h = frames.rows();
  FrameMatrix out(frames.rows(), frames.cols());
  if (steps >= h || -steps >= h) {
    throw Error(ErrorCode::kInvalidArgument, "shift exceeds horizon");
  }
  if (steps >= 0) {
    out.bottomRows(h - steps) = frames.topRows(h - steps);
    out.topRows(steps).rowwise() = frames.row(0);
  } else {
    const int s = -steps;
    out.topRows(h - s) = frames.bottomRows(h - s);
    out.bottomRows(s).rowwise() = frames.row(h - 1);
  }
  return out;
}

ActionPlan TimelineShift(const ActionPlan& plan, std::mt19937_64& rng,
                         int upperbound) {
  if (upperbound < 1 || upperbound >= plan.horizon()) {
    throw Error(ErrorCode::kInvalidArgument,
                "shift upper bound must lie in [1, H)");
  }
  std::uniform_int_distribution<int> amount(1, upperbound);
  std::bernoulli_distribution right(0.5);
  const int steps = amount(rng);
  return {ShiftFrames(plan.frames, right(rng) ? steps : -steps), plan.dt};
}

double LearningRateAt(const TrainConfig& cfg, long step) {
  if (cfg.warmup_steps <= 0 || step >= cfg.warmup_steps) {
    return cfg.learning_rate;
  }
  return cfg.learning_rate * static_cast<double>(step + 1) / cfg.warmup_steps;
}

double EmaDecay(const TrainConfig& cfg, long optimization_step) {
  const long step =
      std::max(0L, optimization_step - cfg.ema_update_after_step - 1);
  if (step <= 0) return 0.0;
  const double value =
      1.0 - std::pow(1.0 + step / cfg.ema_inv_gamma, -cfg.ema_power);
  return std::max(cfg.ema_min, std::min(value, cfg.ema_max));
}

void AdamW::Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                 double lr, const TrainConfig& cfg) {
  ++steps_;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(steps_));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(steps_));
  params *= 1.0 - lr * cfg.weight_decay;
  m_ = cfg.beta1 * m_ + (1.0 - cfg.beta1) * grad;
  v_ = cfg.beta2 * v_ + (1.0 - cfg.beta2) * grad.cwiseAbs2();
  const double step_size = lr / bias1;
  const double root_bias2 = std::sqrt(bias2);
  params.array() -=
      step_size * m_.array() / (v_.array().sqrt() / root_bias2 + cfg.adam_eps);
}

DenoiserShape DiffusionPlanner::ShapeFor(const PlanShape& plan,
                                         const TrainConfig& cfg) {
  DenoiserShape s;
  s.plan_dim = plan.horizon * plan.joints;
  s.cond_dim = kResultDim;
  s.time_embed_dim = cfg.time_embed_dim;
  s.cond_embed_dim = cfg.cond_embed_dim;
  s.hidden = cfg.hidden;
  return s;
}

DiffusionPlanner DiffusionPlanner::Train(const LabeledDemoSet& demos,
                                         const JointLimits& limits,
                                         const TrainConfig& cfg,
                                         TrainingLog* log) {
  if (demos.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no demonstrations to train on");
  }
  if (cfg.batch_size < 1 || cfg.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch size and epochs must be >= 1");
  }
  DiffusionPlanner planner;
  planner.shape_ = demos.shape;
  planner.limits_ = limits;
  planner.cfg_ = cfg;
  planner.schedule_ = NoiseSchedule::Make(cfg.timesteps, cfg.beta_schedule,
                                          cfg.beta_start, cfg.beta_end);
  planner.plan_norm_ = FitPlanNormalizer(demos);
  FrameMatrix results(static_cast<Eigen::Index>(demos.size()), kResultDim);
  for (std::size_t i = 0; i < demos.size(); ++i) {
    results.row(static_cast<Eigen::Index>(i)) =
        demos.entries[i].result.transpose();
  }
  planner.cond_norm_ = RangeNormalizer::Fit(results);
  planner.net_ = Denoiser(ShapeFor(demos.shape, cfg));
  planner.net_.SetCleanSkip(planner.schedule_.alpha_bars());
  planner.net_.Initialize(cfg.seed);
  planner.ema_ = planner.net_.params();

  std::vector<FrameMatrix> normalized;
  std::vector<Eigen::Vector2d> conditions;
  for (const DemoEntry& e : demos.entries) {
    normalized.push_back(planner.plan_norm_.NormalizeRows(e.plan.frames));
    conditions.push_back(planner.cond_norm_.Normalize(e.result));
  }

  const int plan_dim = demos.shape.horizon * demos.shape.joints;
  const int batch = cfg.batch_size;
  const int shift_bound =
      std::min(cfg.shift_steps_upperbound, demos.shape.horizon - 1);
  std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(demos.size()) - 1);
  std::uniform_int_distribution<int> pick_t(1, cfg.timesteps);
  std::uniform_int_distribution<int> shift_amount(1, std::max(1, shift_bound));
  std::bernoulli_distribution shift_right(0.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Denoiser::Batch x_t(plan_dim, batch);
  Denoiser::Batch cond(kResultDim, batch);
  Denoiser::Batch noise(plan_dim, batch);
  std::vector<int> t(batch);
  Eigen::VectorXd grad;
  AdamW opt(planner.net_.params().size());
  if (log != nullptr) log->epoch_loss.reserve(cfg.epochs);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int b = 0; b < batch; ++b) {
      const int idx = pick(rng);
      FrameMatrix frames;
      const FrameMatrix* source = &normalized[idx];
      if (cfg.timeline_shift && shift_bound >= 1) {
        const int amount = shift_amount(rng);
        frames = ShiftFrames(normalized[idx],
                             shift_right(rng) ? amount : -amount);
        source = &frames;
      }
      t[b] = pick_t(rng);
      for (int d = 0; d < plan_dim; ++d) noise(d, b) = gauss(rng);
      const double ab = planner.schedule_.alpha_bar(t[b]);
      const Eigen::Map<const Eigen::VectorXd> x0(source->data(), plan_dim);
      x_t.col(b) = std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * noise.col(b);
      cond.col(b) = conditions[idx];
    }
    const double loss =
        planner.net_.LossAndGradient(x_t, t, cond, noise, &grad);
    const double decay = EmaDecay(cfg, opt.steps());
    opt.Step(planner.net_.params(), grad, LearningRateAt(cfg, opt.steps()),
             cfg);
    planner.ema_ = decay * planner.ema_ + (1.0 - decay) * planner.net_.params();
    if (log != nullptr) log->epoch_loss.push_back(loss);
  }
  planner.trained_ = true;
  return planner;
}

ActionPlan DiffusionPlanner::Sample(const ConditionVector& c,
                                    std::mt19937_64& rng) const {
  if (!trained_) {
    throw Error(ErrorCode::kNotTrained, "planner has not been trained");
  }
  const int plan_dim = shape_.horizon * shape_.joints;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Denoiser::Batch x(plan_dim, 1);
  for (int d = 0; d < plan_dim; ++d) x(d, 0) = gauss(rng);
  Denoiser::Batch cond(kResultDim, 1);
  cond.col(0) = cond_norm_.Normalize(c);
  std::vector<int> t(1);

  for (int step = schedule_.timesteps(); step >= 1; --step) {
    t[0] = step;
    const Denoiser::Batch eps = net_.Forward(ema_, x, t, cond);
    const double ab = schedule_.alpha_bar(step);
    const double ab_prev = schedule_.alpha_bar_prev(step);
    const double beta = schedule_.beta(step);
    Denoiser::Batch x0 = (x - std::sqrt(1.0 - ab) * eps) / std::sqrt(ab);
    if (cfg_.clip_sample) x0 = x0.cwiseMax(-1.0).cwiseMin(1.0);
    const double coef_x0 = std::sqrt(ab_prev) * beta / (1.0 - ab);
    const double coef_xt = std::sqrt(1.0 - beta) * (1.0 - ab_prev) / (1.0 - ab);
    x = coef_x0 * x0 + coef_xt * x;
    if (step > 1) {
      const double sigma = std::sqrt(schedule_.posterior_variance(step));
      for (int d = 0; d < plan_dim; ++d) x(d, 0) += sigma * gauss(rng);
    }
  }
  FrameMatrix frames =
      Eigen::Map<const FrameMatrix>(x.data(), shape_.horizon, shape_.joints);
  ActionPlan plan{plan_norm_.DenormalizeRows(frames), shape_.dt};
  return ClampToLimits(std::move(plan), limits_);
}

DiffusionPlanner DiffusionPlanner::FromParts(
    PlanShape shape, JointLimits limits, TrainConfig cfg,
    PlanNormalizer plan_norm, RangeNormalizer cond_norm,
    Eigen::VectorXd train_params, Eigen::VectorXd ema_params) {
  DiffusionPlanner p;
  p.shape_ = shape;
  p.limits_ = std::move(limits);
  p.cfg_ = cfg;
  p.schedule_ = NoiseSchedule::Make(cfg.timesteps, cfg.beta_schedule,
                                    cfg.beta_start, cfg.beta_end);
  p.net_ = Denoiser(ShapeFor(shape, cfg));
  p.net_.SetCleanSkip(p.schedule_.alpha_bars());
  const auto expected =
      static_cast<Eigen::Index>(Denoiser::ParameterCount(p.net_.shape()));
  if (train_params.size() != expected || ema_params.size() != expected) {
    throw Error(ErrorCode::kCorruptCheckpoint,
                "parameter count does not match the declared architecture");
  }
  p.net_.params() = std::move(train_params);
  p.ema_ = std::move(ema_params);
  p.plan_norm_ = std::move(plan_norm);
  p.cond_norm_ = std::move(cond_norm);
  p.trained_ = true;
  return p;
}

}  // namespace adap
