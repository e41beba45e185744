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

#include "adap/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "adap/bspline.hpp"

namespace adap {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void HashBytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void HashDouble(std::uint64_t& h, double v) { HashBytes(h, &v, sizeof v); }

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Pose keyframes (yaw, shoulder, elbow, wrist) of the base swing at
// evenly spaced spline parameters.
FrameMatrix BaseKeyframes(TaskKind task) {
  FrameMatrix k(6, 4);
  switch (task) {
    case TaskKind::kProjectile:
      k << 0.0, 1.90, 0.90, 0.60,
           0.0, 1.80, 0.80, 0.50,
           0.0, 1.40, 0.40, 0.20,
           0.0, 1.00, 0.00, 0.00,
           0.0, 0.70, -0.20, -0.20,
           0.0, 0.60, -0.30, -0.30;
      break;
    case TaskKind::kSliding:
      // Low sweep: the tool skims forward close to the table.
      k << 0.0, 0.20, -1.80, 0.60,
           0.0, 0.15, -1.70, 0.55,
           0.0, 0.05, -1.30, 0.40,
           0.0, -0.05, -0.90, 0.20,
           0.0, -0.10, -0.60, 0.00,
           0.0, -0.10, -0.50, -0.05;
      break;
    case TaskKind::kPendulum:
      k << 0.0, 1.60, 0.40, 0.30,
           0.0, 1.50, 0.30, 0.25,
           0.0, 1.20, 0.00, 0.05,
           0.0, 0.90, -0.20, -0.10,
           0.0, 0.70, -0.30, -0.20,
           0.0, 0.65, -0.30, -0.20;
      break;
  }
  return k;
}

}  // namespace

FrameMatrix BaseControlPoints(TaskKind task, int control_points) {
  if (control_points < 4) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 4 control points");
  }
  const FrameMatrix key = BaseKeyframes(task);
  const int inner = control_points - 2;
  FrameMatrix ctrl(control_points, key.cols());
  // Rows 1..n-2 resample the keyframes; rows 0 and n-1 repeat their
  // neighbours so the swing starts and ends with zero velocity.
  for (int i = 0; i < inner; ++i) {
    const double s = static_cast<double>(i) / (inner - 1) * (key.rows() - 1);
    const int lo = std::min(static_cast<int>(std::floor(s)),
                            static_cast<int>(key.rows()) - 2);
    const double f = s - lo;
    ctrl.row(i + 1) = (1.0 - f) * key.row(lo) + f * key.row(lo + 1);
  }
  ctrl.row(0) = ctrl.row(1);
  ctrl.row(control_points - 1) = ctrl.row(control_points - 2);
  return ctrl;
}

PriorSet GeneratePriors(const EnvModel& env, const ExperimentConfig& cfg,
                        std::uint64_t seed) {
  const PriorConfig& pc = cfg.priors;
  if (pc.count < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 priors");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, pc.sigma);
  std::uniform_int_distribution<int> jitter(-pc.timing_jitter,
                                            pc.timing_jitter);
  const FrameMatrix base = BaseControlPoints(cfg.task, pc.control_points);
  const int n_ctrl = pc.control_points;

  struct Candidate {
    ActionPlan plan;
    ResultVector result;
    int offset;
  };
  std::vector<Candidate> candidates;
  const int total = pc.count * pc.candidate_factor;
  for (int k = 0; k < total; ++k) {
    FrameMatrix ctrl = base;
    for (int i = 2; i <= n_ctrl - 2; ++i) {
      for (int j = 0; j < ctrl.cols(); ++j) ctrl(i, j) += noise(rng);
    }
    ctrl.row(n_ctrl - 1) = ctrl.row(n_ctrl - 2);
    const int offset = jitter(rng);
    ActionPlan plan = ClampToLimits(
        SampleSplinePlan(ctrl, cfg.horizon, pc.window_start + offset,
                         pc.window_end + offset, cfg.dt),
        env.arm.limits);
    try {
      const ResultVector r = Rollout(env, plan);
      candidates.push_back({std::move(plan), r, offset});
    } catch (const Error&) {
      // Invalid launch: not a usable prior.
    }
  }
  if (static_cast<int>(candidates.size()) < pc.count) {
    throw Error(ErrorCode::kInsufficientDiversity,
                std::to_string(candidates.size()) + " valid candidates for " +
                    std::to_string(pc.count) + " priors");
  }

  // Farthest-point selection over the candidates landing near the goal
  // area, starting from the one closest to its center.
  const PlaneVector center = cfg.goals.center;
  const PlaneVector reach = cfg.goals.size / 2.0 +
                            PlaneVector::Constant(pc.area_margin);
  std::vector<int> pool;
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    const PlaneVector d = (candidates[i].result - center).cwiseAbs();
    if (pc.area_margin < 0.0 || (d.array() <= reach.array()).all()) {
      pool.push_back(i);
    }
  }
  if (static_cast<int>(pool.size()) < pc.count) {
    pool.resize(candidates.size());
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) pool[i] = i;
  }
  std::vector<int> chosen;
  int first = pool[0];
  for (int i : pool) {
    if ((candidates[i].result - center).norm() <
        (candidates[first].result - center).norm()) {
      first = i;
    }
  }
  chosen.push_back(first);
  std::vector<double> gap(candidates.size(),
                          std::numeric_limits<double>::infinity());
  while (static_cast<int>(chosen.size()) < pc.count) {
    const ResultVector& last = candidates[chosen.back()].result;
    int best = -1;
    for (int i : pool) {
      gap[i] = std::min(gap[i], (candidates[i].result - last).norm());
      if (best < 0 || gap[i] > gap[best]) best = i;
    }
    if (gap[best] < pc.min_separation) {
      throw Error(ErrorCode::kInsufficientDiversity,
                  "only " + std::to_string(chosen.size()) +
                      " results are pairwise >= " +
                      std::to_string(pc.min_separation) + " m apart");
    }
    chosen.push_back(best);
  }

  PriorSet out;
  out.candidates_tried = total;
  for (int i : chosen) {
    out.plans.push_back(candidates[i].plan);
    out.results.push_back(candidates[i].result);
    out.offsets.push_back(candidates[i].offset);
  }
  return out;
}

LabeledDemoSet BuildDemoSet(const PriorSet& priors, const PlanShape& shape,
                            Perceptron& perceptron) {
  if (priors.plans.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no priors");
  }
  LabeledDemoSet demos;
  demos.shape = shape;
  for (std::size_t i = 0; i < priors.plans.size(); ++i) {
    // Stage 1 perceives against the origin (g_0 = 0).
    demos.entries.push_back(
        {priors.plans[i], perceptron.Perceive(priors.results[i])});
  }
  return demos;
}

std::uint64_t PlanHash(const ActionPlan& plan) {
  std::uint64_t h = kFnvOffset;
  const int dims[2] = {plan.horizon(), plan.joints()};
  HashBytes(h, dims, sizeof dims);
  HashDouble(h, plan.dt);
  HashBytes(h, plan.frames.data(), sizeof(double) * plan.frames.size());
  return h;
}

std::uint64_t PlannerKey(const LabeledDemoSet& demos, const TrainConfig& cfg) {
  std::uint64_t h = kFnvOffset;
  const std::uint64_t c = ConfigHash(cfg);
  HashBytes(h, &c, sizeof c);
  for (const DemoEntry& e : demos.entries) {
    const std::uint64_t p = PlanHash(e.plan);
    HashBytes(h, &p, sizeof p);
    HashDouble(h, e.result.x());
    HashDouble(h, e.result.y());
  }
  return h;
}

// JSON ------------------------------------------------------------------------

namespace {

nlohmann::json Pair(const PlaneVector& v) { return {v.x(), v.y()}; }

PlaneVector PairFrom(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kSchemaError, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json EpisodeToJson(const EpisodeOutcome& e) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const RoundRecord& r : e.rounds) {
    nlohmann::json j = {{"round", r.round},
                        {"sample_seed", r.sample_seed},
                        {"condition", Pair(r.condition)},
                        {"plan_hash", r.plan_hash},
                        {"status", r.status}};
    j["result"] = r.result ? Pair(*r.result) : nlohmann::json();
    j["true_error"] = r.true_error ? Pair(*r.true_error) : nlohmann::json();
    j["perceived_error"] =
        r.perceived_error ? Pair(*r.perceived_error) : nlohmann::json();
    rounds.push_back(std::move(j));
  }
  nlohmann::json j = {{"goal_index", e.goal_index},
                      {"goal", Pair(e.goal)},
                      {"perceived_goal", Pair(e.perceived_goal)},
                      {"stage1_trials", e.stage1_trials},
                      {"aborted", e.aborted},
                      {"rounds", std::move(rounds)}};
  j["success_round"] =
      e.success_round ? nlohmann::json(*e.success_round) : nlohmann::json();
  const auto total = e.total_trials();
  j["total_trials"] = total ? nlohmann::json(*total) : nlohmann::json();
  return j;
}

EpisodeOutcome EpisodeFromJson(const nlohmann::json& j) {
  try {
    EpisodeOutcome e;
    e.goal_index = j.at("goal_index").get<int>();
    e.goal = PairFrom(j.at("goal"));
    e.perceived_goal = PairFrom(j.at("perceived_goal"));
    e.stage1_trials = j.at("stage1_trials").get<int>();
    e.aborted = j.at("aborted").get<bool>();
    if (!j.at("success_round").is_null()) {
      e.success_round = j.at("success_round").get<int>();
    }
    for (const auto& r : j.at("rounds")) {
      RoundRecord rec;
      rec.round = r.at("round").get<int>();
      rec.sample_seed = r.at("sample_seed").get<std::uint64_t>();
      rec.condition = PairFrom(r.at("condition"));
      rec.plan_hash = r.at("plan_hash").get<std::uint64_t>();
      rec.status = r.at("status").get<std::string>();
      if (!r.at("result").is_null()) rec.result = PairFrom(r.at("result"));
      if (!r.at("true_error").is_null()) {
        rec.true_error = PairFrom(r.at("true_error"));
      }
      if (!r.at("perceived_error").is_null()) {
        rec.perceived_error = PairFrom(r.at("perceived_error"));
      }
      e.rounds.push_back(std::move(rec));
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kSchemaError, std::string("episode: ") + ex.what());
  }
}

// Stage 2 ----------------------------------------------------------------------

EpisodeOutcome RunStage2(const EnvModel& env, const PlanFn& plan,
                         AdapterState adapter, const GoalVector& goal,
                         const PerceiveFn& perceive,
                         const Stage2Options& options) {
  return RunStage2(
      [&env](const ActionPlan& a) { return Rollout(env, a); }, plan,
      std::move(adapter), goal, perceive, options);
}

EpisodeOutcome RunStage2(const RolloutFn& rollout, const PlanFn& plan,
                         AdapterState adapter, const GoalVector& goal,
                         const PerceiveFn& perceive,
                         const Stage2Options& options) {
  EpisodeOutcome out;
  out.goal = goal;
  out.perceived_goal =
      options.quantize_goal ? Perceive(goal, options.grid) : goal;
  out.stage1_trials = static_cast<int>(adapter.initial_size());
  for (int round = 1; round <= options.max_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    rec.condition = adapter.Propose(out.perceived_goal);
    const ActionPlan a = plan(rec.condition, round, &rec.sample_seed);
    rec.plan_hash = PlanHash(a);
    try {
      rec.result = rollout(a);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateMotion &&
          e.code() != ErrorCode::kNoImpact) {
        throw;
      }
      rec.status = std::string(ToString(e.code()));
      out.rounds.push_back(std::move(rec));
      continue;
    }
    rec.true_error = *rec.result - goal;
    if (rec.true_error->norm() < options.success_threshold) {
      rec.status = "success";
      out.success_round = round;
      out.rounds.push_back(std::move(rec));
      break;
    }
    rec.status = "miss";
    try {
      rec.perceived_error = perceive(*rec.result, goal, round);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAborted) throw;
      rec.status = "aborted";
      out.aborted = true;
      out.rounds.push_back(std::move(rec));
      break;
    }
    adapter.Update(rec.condition, out.perceived_goal + *rec.perceived_error);
    out.rounds.push_back(std::move(rec));
  }
  return out;
}

std::vector<GoalVector> GoalGrid(const GoalGridConfig& cfg) {
  std::vector<GoalVector> goals;
  goals.reserve(static_cast<std::size_t>(cfg.nx) * cfg.ny);
  const PlaneVector origin = cfg.center - 0.5 * cfg.size;
  for (int iy = 0; iy < cfg.ny; ++iy) {
    for (int ix = 0; ix < cfg.nx; ++ix) {
      goals.emplace_back(origin.x() + (ix + 0.5) * cfg.size.x() / cfg.nx,
                         origin.y() + (iy + 0.5) * cfg.size.y() / cfg.ny);
    }
  }
  return goals;
}

std::vector<double> SuccessCurve(const std::vector<EpisodeOutcome>& episodes,
                                 int max_rounds) {
  std::vector<double> curve(max_rounds, 0.0);
  if (episodes.empty()) return curve;
  for (const EpisodeOutcome& e : episodes) {
    if (!e.success_round) continue;
    for (int r = *e.success_round; r <= max_rounds; ++r) curve[r - 1] += 1.0;
  }
  for (double& v : curve) v /= static_cast<double>(episodes.size());
  return curve;
}

// Cache --------------------------------------------------------------------------

std::shared_ptr<const DiffusionPlanner> PlannerCache::Get(
    std::uint64_t key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = planners_.find(key);
  return it == planners_.end() ? nullptr : it->second;
}

void PlannerCache::Put(std::uint64_t key,
                       std::shared_ptr<const DiffusionPlanner> planner,
                       TrainingLog log) {
  std::lock_guard<std::mutex> lock(mu_);
  planners_[key] = std::move(planner);
  logs_[key] = std::move(log);
}

const TrainingLog* PlannerCache::Log(std::uint64_t key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = logs_.find(key);
  return it == logs_.end() ? nullptr : &it->second;
}

// Experiment ---------------------------------------------------------------------

Stage1Result RunStage1Data(const ExperimentConfig& cfg) {
  const EnvModel env = MakeEnv(cfg);
  Stage1Result s;
  s.priors = GeneratePriors(env, cfg, cfg.seed);
  Perceptron p = cfg.perception == PerceptionMode::kStochastic
                     ? Perceptron::Stochastic(SplitMix64(cfg.seed),
                                              cfg.perception_spread)
                     : Perceptron();
  s.demos = BuildDemoSet(s.priors, MakePlanShape(cfg), p);
  return s;
}

PlanFn MakePlanFn(const ExperimentConfig& cfg, Method method,
                  const LabeledDemoSet& demos,
                  std::shared_ptr<const DiffusionPlanner> planner,
                  int goal_index) {
  if (UsesDiffusion(method)) {
    if (!planner || !planner->trained()) {
      throw Error(ErrorCode::kNotTrained, "diffusion method without planner");
    }
    const std::uint64_t seed = cfg.seed;
    const SamplerMode mode = cfg.sampler;
    return [planner, seed, mode, goal_index](const ConditionVector& c,
                                              int round,
                                              std::uint64_t* used) {
      std::uint64_t s = seed;
      if (mode == SamplerMode::kFixedPerRound) {
        s = seed ^ static_cast<std::uint64_t>(round);
      } else if (mode == SamplerMode::kStochastic) {
        s = SplitMix64(seed ^ (static_cast<std::uint64_t>(goal_index) << 32) ^
                       static_cast<std::uint64_t>(round));
      }
      if (used) *used = s;
      return planner->Sample(c, s);
    };
  }
  const EnvModel env = MakeEnv(cfg);
  auto inn = std::make_shared<InnPlanner>(
      method == Method::kInnAligned ? AlignDataset(demos, env.arm) : demos,
      env.arm.limits);
  return [inn](const ConditionVector& c, int, std::uint64_t* used) {
    if (used) *used = 0;
    return inn->Plan(c);
  };
}

PerceiveFn MakePerceiveFn(const ExperimentConfig& cfg, int goal_index) {
  if (cfg.perception == PerceptionMode::kStochastic) {
    auto p = std::make_shared<Perceptron>(Perceptron::Stochastic(
        SplitMix64(cfg.seed + 1 + static_cast<std::uint64_t>(goal_index)),
        cfg.perception_spread));
    return [p](const ResultVector& r, const GoalVector& g, int) {
      return p->PerceiveResult(r, g);
    };
  }
  if (cfg.perception == PerceptionMode::kInteractive) {
    throw Error(ErrorCode::kInvalidArgument,
                "interactive perception needs a terminal hook");
  }
  return [](const ResultVector& r, const GoalVector& g, int) {
    return Perceive(r - g);
  };
}

const MethodReport* ExperimentReport::Find(Method m) const {
  for (const MethodReport& r : methods) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg, PlannerCache* cache,
                               const ExperimentHooks& hooks) {
  auto log = [&](const std::string& s) {
    if (hooks.log) hooks.log(s);
  };
  PlannerCache local;
  if (!cache) cache = &local;

  ExperimentReport report;
  report.config = cfg;
  const Stage1Result s1 = RunStage1Data(cfg);
  report.demos = s1.demos;
  log("stage 1: " + std::to_string(s1.demos.size()) + " priors from " +
      std::to_string(s1.priors.candidates_tried) + " candidates");

  const EnvModel env2 = MakeStage2Env(cfg);
  const JointLimits limits = MakeEnv(cfg).arm.limits;
  const std::vector<GoalVector> goals = GoalGrid(cfg.goals);
  Stage2Options opts;
  opts.max_rounds = cfg.max_rounds;
  opts.success_threshold = cfg.success_threshold;

  for (Method method : cfg.methods) {
    MethodReport mr;
    mr.method = method;
    mr.prior_count = static_cast<int>(s1.demos.size());
    std::shared_ptr<const DiffusionPlanner> planner;
    if (UsesDiffusion(method)) {
      const TrainConfig tc = TrainConfigFor(cfg, method);
      const std::uint64_t key = PlannerKey(s1.demos, tc);
      planner = cache->Get(key);
      if (!planner) {
        log("training planner for " + std::string(ToString(method)));
        TrainingLog tlog;
        planner = std::make_shared<const DiffusionPlanner>(
            DiffusionPlanner::Train(s1.demos, limits, tc, &tlog));
        cache->Put(key, planner, std::move(tlog));
      } else {
        log("reusing planner for " + std::string(ToString(method)));
      }
      mr.planner_key = key;
      if (const TrainingLog* l = cache->Log(key)) mr.training = *l;
      if (hooks.on_planner) hooks.on_planner(key, *planner);
    }
    const AdapterState adapter0 =
        AdapterState::FromDemos(s1.demos, AdapterConfigFor(cfg, method));

    mr.episodes.resize(goals.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= goals.size()) return;
        try {
          const int gi = static_cast<int>(i);
          EpisodeOutcome e = RunStage2(
              env2, MakePlanFn(cfg, method, s1.demos, planner, gi), adapter0,
              goals[i], MakePerceiveFn(cfg, gi), opts);
          e.goal_index = gi;
          mr.episodes[i] = std::move(e);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(goals.size());
        }
      }
    };
    const int jobs = std::max(1, std::min<int>(cfg.jobs, goals.size()));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    mr.success_rate = SuccessCurve(mr.episodes, cfg.max_rounds);
    double sum = 0.0;
    int n = 0;
    for (const EpisodeOutcome& e : mr.episodes) {
      if (e.success_round) {
        sum += *e.success_round;
        ++n;
      }
    }
    mr.mean_rounds_to_success =
        n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
    mr.mean_total_trials = mr.prior_count + mr.mean_rounds_to_success;
    std::string line = std::string(ToString(method)) + ": success";
    char buf[64];
    int shown = 0;
    for (int r : {1, 3, cfg.max_rounds}) {
      if (r > cfg.max_rounds || r <= shown) continue;
      shown = r;
      std::snprintf(buf, sizeof buf, " @%d %.2f", r, mr.success_rate[r - 1]);
      line += buf;
    }
    std::snprintf(buf, sizeof buf, ", mean rounds %.2f",
                  mr.mean_rounds_to_success);
    line += buf;
    log(line);
    report.methods.push_back(std::move(mr));
  }
  return report;
}

}  // namespace adap
