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

// adap: command-line front end for prior generation, training, single-goal
// adaptation, full experiments and episode replay.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adap/checkpoint.hpp"
#include "adap/config.hpp"
#include "adap/interactive.hpp"
#include "adap/orchestrator.hpp"
#include "adap/report.hpp"

namespace fs = std::filesystem;
using namespace adap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string method;
  std::vector<double> goal;
  std::string episode;
  bool force = false;
  std::optional<int> jobs;
};

void Log(const std::string& s) { std::cerr << s << '\n'; }

ExperimentConfig LoadConfig(const Options& o) {
  ExperimentConfig cfg = DefaultConfig();
  if (!o.config_path.empty()) {
    try {
      cfg = ParseConfigFile(o.config_path);
    } catch (const Error& e) {
      // An unreadable config file is a config error, not a runtime one.
      if (e.code() != ErrorCode::kIo) throw;
      throw Error(ErrorCode::kSchemaError, e.what());
    }
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.train.seed = *o.seed;
  }
  if (o.jobs) {
    if (*o.jobs < 1) throw Error(ErrorCode::kSchemaError, "--jobs: must be >= 1");
    cfg.jobs = *o.jobs;
  }
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (const char* env = std::getenv("ADAP_OUT"); env && *env) cfg.out_dir = env;
  if (!o.method.empty()) {
    try {
      cfg.methods = {ParseMethod(o.method)};
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError, std::string("--method: ") + e.what());
    }
  }
  return cfg;
}

fs::path PrepareOut(const ExperimentConfig& cfg) {
  fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out.string());
  return out;
}

// D_e from <out>/demos.json when present, otherwise regenerated and saved.
LabeledDemoSet LoadOrBuildDemos(const ExperimentConfig& cfg,
                                const fs::path& out) {
  const fs::path path = out / "demos.json";
  if (fs::exists(path)) {
    LabeledDemoSet demos = DemoSetFromJson(
        nlohmann::json::parse(ReadTextFile(path.string())));
    if (!(demos.shape == MakePlanShape(cfg))) {
      throw Error(ErrorCode::kConfigMismatch,
                  path.string() + " does not match the configured plan shape");
    }
    Log("loaded " + std::to_string(demos.size()) + " demos from " +
        path.string());
    return demos;
  }
  const Stage1Result s1 = RunStage1Data(cfg);
  WriteTextFile(path.string(), DemoSetToJson(s1.demos).dump() + "\n");
  Log("generated " + std::to_string(s1.demos.size()) + " demos");
  return s1.demos;
}

std::shared_ptr<const DiffusionPlanner> LoadOrTrain(
    const ExperimentConfig& cfg, Method method, const LabeledDemoSet& demos,
    const fs::path& out, bool force, std::uint64_t* key_out) {
  const TrainConfig tc = TrainConfigFor(cfg, method);
  const std::uint64_t key = PlannerKey(demos, tc);
  if (key_out) *key_out = key;
  const fs::path path = out / CheckpointFileName(key);
  if (fs::exists(path)) {
    CheckpointLoadOptions lo;
    lo.expected_hash = ConfigHash(tc);
    lo.force = force;
    lo.warn = [](const std::string& s) { Log("warning: " + s); };
    Log("loading " + path.string());
    return std::make_shared<const DiffusionPlanner>(
        LoadCheckpoint(path.string(), lo));
  }
  Log("training planner (" + std::to_string(tc.epochs) + " epochs)");
  TrainingLog tlog;
  auto planner = std::make_shared<const DiffusionPlanner>(
      DiffusionPlanner::Train(demos, MakeEnv(cfg).arm.limits, tc, &tlog));
  SaveCheckpoint(*planner, path.string());
  WriteTextFile(
      (out / ("training_" + std::string(ToString(method)) + ".csv")).string(),
      TrainingCsv(tlog));
  Log("saved " + path.string());
  return planner;
}

int CmdGenPriors(const Options& o) {
  const ExperimentConfig cfg = LoadConfig(o);
  const fs::path out = PrepareOut(cfg);
  const Stage1Result s1 = RunStage1Data(cfg);
  nlohmann::json priors = nlohmann::json::array();
  for (std::size_t i = 0; i < s1.priors.plans.size(); ++i) {
    priors.push_back({{"plan", PlanToJson(s1.priors.plans[i])},
                      {"result", {s1.priors.results[i].x(),
                                  s1.priors.results[i].y()}},
                      {"perceived_result", {s1.demos.entries[i].result.x(),
                                            s1.demos.entries[i].result.y()}},
                      {"timing_offset", s1.priors.offsets[i]}});
  }
  WriteTextFile((out / "priors.json").string(),
                nlohmann::json({{"seed", cfg.seed},
                                {"candidates", s1.priors.candidates_tried},
                                {"priors", priors}})
                        .dump(1) +
                    "\n");
  WriteTextFile((out / "demos.json").string(),
                DemoSetToJson(s1.demos).dump() + "\n");
  for (const DemoEntry& e : s1.demos.entries) {
    std::cout << "prior result " << e.result.x() << ' ' << e.result.y() << '\n';
  }
  return kExitOk;
}

int CmdTrain(const Options& o) {
  ExperimentConfig cfg = LoadConfig(o);
  const fs::path out = PrepareOut(cfg);
  const LabeledDemoSet demos = LoadOrBuildDemos(cfg, out);
  for (Method m : cfg.methods) {
    if (!UsesDiffusion(m)) continue;
    std::uint64_t key = 0;
    LoadOrTrain(cfg, m, demos, out, o.force, &key);
    std::cout << ToString(m) << ' ' << CheckpointFileName(key) << '\n';
  }
  return kExitOk;
}

int CmdAdapt(const Options& o) {
  if (o.goal.size() != 2) {
    throw Error(ErrorCode::kSchemaError, "--goal: expected x y");
  }
  ExperimentConfig cfg = LoadConfig(o);
  const Method method = o.method.empty() ? Method::kAdap : ParseMethod(o.method);
  const fs::path out = PrepareOut(cfg);
  const LabeledDemoSet demos = LoadOrBuildDemos(cfg, out);
  std::shared_ptr<const DiffusionPlanner> planner;
  std::uint64_t key = 0;
  if (UsesDiffusion(method)) {
    planner = LoadOrTrain(cfg, method, demos, out, o.force, &key);
  }
  PerceiveFn perceive;
  if (cfg.perception == PerceptionMode::kInteractive) {
    perceive = [](const ResultVector& r, const GoalVector& g, int round) {
      std::ostringstream ctx;
      ctx << "round " << round << ": landed at (" << r.x() << ", " << r.y()
          << "), goal (" << g.x() << ", " << g.y() << ")";
      return InteractivePerceive(std::cin, std::cout, ctx.str());
    };
  } else {
    perceive = MakePerceiveFn(cfg, 0);
  }
  Stage2Options opts;
  opts.max_rounds = cfg.max_rounds;
  opts.success_threshold = cfg.success_threshold;
  const GoalVector goal(o.goal[0], o.goal[1]);
  EpisodeOutcome e = RunStage2(
      MakeStage2Env(cfg), MakePlanFn(cfg, method, demos, planner, 0),
      AdapterState::FromDemos(demos, AdapterConfigFor(cfg, method)), goal,
      perceive, opts);

  for (const RoundRecord& r : e.rounds) {
    std::cout << "round " << r.round << ' ' << r.status;
    if (r.result) {
      std::cout << " result " << r.result->x() << ' ' << r.result->y()
                << " error " << r.true_error->norm();
    }
    std::cout << '\n';
  }
  if (e.aborted) {
    std::cout << "aborted\n";
  } else if (e.success_round) {
    std::cout << "success in " << *e.success_round << " rounds, total trials "
              << *e.total_trials() << '\n';
  } else {
    std::cout << "no success in " << cfg.max_rounds << " rounds\n";
  }

  ExperimentReport report;
  report.config = cfg;
  report.config.methods = {method};
  report.demos = demos;
  MethodReport mr;
  mr.method = method;
  mr.prior_count = static_cast<int>(demos.size());
  if (planner) mr.planner_key = key;
  mr.success_rate = SuccessCurve({e}, cfg.max_rounds);
  mr.mean_rounds_to_success =
      e.success_round ? *e.success_round : std::nan("");
  mr.mean_total_trials = mr.prior_count + mr.mean_rounds_to_success;
  mr.episodes.push_back(std::move(e));
  report.methods.push_back(std::move(mr));
  WriteTextFile((out / "episode.json").string(),
                EpisodesJson(report).dump(1) + "\n");
  return kExitOk;
}

int CmdExperiment(const Options& o) {
  ExperimentConfig cfg = LoadConfig(o);
  if (cfg.perception == PerceptionMode::kInteractive) {
    throw Error(ErrorCode::kSchemaError,
                "$.perception.mode: interactive perception is only available "
                "in `adapt`");
  }
  const fs::path out = PrepareOut(cfg);
  ExperimentHooks hooks;
  hooks.log = Log;
  hooks.on_planner = [&](std::uint64_t key, const DiffusionPlanner& p) {
    const fs::path path = out / CheckpointFileName(key);
    if (!fs::exists(path)) SaveCheckpoint(p, path.string());
  };
  const ExperimentReport report = RunExperiment(cfg, nullptr, hooks);
  WriteReport(report, out.string());
  std::cout << ResultsCsv(report);
  return kExitOk;
}

int CmdReplay(const Options& o) {
  const fs::path path(o.episode);
  const nlohmann::json doc = nlohmann::json::parse(ReadTextFile(path.string()));
  const fs::path dir = path.parent_path();
  ExperimentConfig cfg;
  try {
    cfg = ParseConfig(doc.at("config"));
    if (o.jobs) cfg.jobs = *o.jobs;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("episode file: ") + e.what());
  }
  const LabeledDemoSet demos = DemoSetFromJson(nlohmann::json::parse(
      ReadTextFile((dir / doc.at("demos").get<std::string>()).string())));
  const EnvModel env = MakeStage2Env(cfg);

  int episodes = 0, rounds = 0, mismatches = 0;
  for (const auto& m : doc.at("methods")) {
    const Method method = ParseMethod(m.at("method").get<std::string>());
    if (!o.method.empty() && ParseMethod(o.method) != method) continue;
    std::shared_ptr<const DiffusionPlanner> planner;
    std::optional<InnPlanner> inn;
    if (UsesDiffusion(method)) {
      CheckpointLoadOptions lo;
      lo.expected_hash = ConfigHash(TrainConfigFor(cfg, method));
      lo.force = o.force;
      lo.warn = [](const std::string& s) { Log("warning: " + s); };
      planner = std::make_shared<const DiffusionPlanner>(LoadCheckpoint(
          (dir / m.at("checkpoint").get<std::string>()).string(), lo));
    } else {
      const ArmModel arm = MakeEnv(cfg).arm;
      inn.emplace(method == Method::kInnAligned ? AlignDataset(demos, arm)
                                                : demos,
                  arm.limits);
    }
    for (const auto& ej : m.at("episodes")) {
      const EpisodeOutcome e = EpisodeFromJson(ej);
      ++episodes;
      for (const RoundRecord& r : e.rounds) {
        ++rounds;
        const ActionPlan a = planner ? planner->Sample(r.condition, r.sample_seed)
                                     : inn->Plan(r.condition);
        std::optional<ResultVector> result;
        try {
          result = Rollout(env, a);
        } catch (const Error& err) {
          if (err.code() != ErrorCode::kDegenerateMotion &&
              err.code() != ErrorCode::kNoImpact) {
            throw;
          }
        }
        const bool same =
            PlanHash(a) == r.plan_hash && result.has_value() == r.result.has_value() &&
            (!result || (result->x() == r.result->x() && result->y() == r.result->y()));
        if (!same) {
          ++mismatches;
          std::cout << "mismatch: " << ToString(method) << " goal "
                    << e.goal_index << " round " << r.round << '\n';
        }
      }
    }
  }
  std::cout << "replayed " << episodes << " episodes, " << rounds
            << " rounds, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADAP: diffusion action planning with a perception-driven "
               "condition adapter"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "experiment config (JSON)");
    sub->add_option("--seed", seed, "seed override")
        ->each([&](const std::string&) { o.seed = seed; });
    sub->add_option("--out", o.out, "output directory (ADAP_OUT overrides)");
    sub->add_option("--method", o.method,
                    "adap | adap_no_shift | adap_no_forget | inn | inn_aligned");
    sub->add_flag("--force", o.force,
                  "load checkpoints whose config hash does not match");
    sub->add_option("--jobs", jobs, "worker threads for stage 2")
        ->each([&](const std::string&) { o.jobs = jobs; });
  };
  CLI::App* gen = app.add_subcommand("gen-priors", "generate and label priors");
  CLI::App* train = app.add_subcommand("train", "train the diffusion planner");
  CLI::App* adapt = app.add_subcommand("adapt", "adapt to a single goal");
  CLI::App* exp = app.add_subcommand("experiment", "run the goal-grid study");
  CLI::App* replay = app.add_subcommand("replay", "replay stored episodes");
  for (CLI::App* sub : {gen, train, adapt, exp, replay}) add_common(sub);
  adapt->add_option("--goal", o.goal, "goal position x y (m)")
      ->expected(2)
      ->required();
  replay->add_option("--episode", o.episode, "episodes.json or episode.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return CmdGenPriors(o);
    if (train->parsed()) return CmdTrain(o);
    if (adapt->parsed()) return CmdAdapt(o);
    if (exp->parsed()) return CmdExperiment(o);
    if (replay->parsed()) return CmdReplay(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kParseError:
      case ErrorCode::kSchemaError:
      case ErrorCode::kConfigMismatch:
        return kExitConfig;
      default:
        return kExitRuntime;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
