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

#include "adap/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace adap {

namespace {

using nlohmann::json;

[[noreturn]] void SchemaFail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, path + ": " + what);
}

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) SchemaFail(path_, "expected an object");
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) {
        SchemaFail(Child(item.key()), "unknown key \"" + item.key() + "\"");
      }
    }
  }

  std::string Child(const std::string& key) const { return path_ + "." + key; }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void Number(const std::string& key, double* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) SchemaFail(Child(key), "expected a number");
      *out = v->get<double>();
    }
  }

  template <typename Int>
  void Integer(const std::string& key, Int* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) SchemaFail(Child(key), "expected an integer");
      *out = v->get<Int>();
    }
  }

  void Bool(const std::string& key, bool* out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) SchemaFail(Child(key), "expected a boolean");
      *out = v->get<bool>();
    }
  }

  void String(const std::string& key, std::string* out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) SchemaFail(Child(key), "expected a string");
      *out = v->get<std::string>();
    }
  }

  void Pair(const std::string& key, PlaneVector* out) {
    if (const json* v = Find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() ||
          !(*v)[1].is_number()) {
        SchemaFail(Child(key), "expected [x, y]");
      }
      *out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
  }

  void Object(const std::string& key,
              const std::function<void(ObjectReader&)>& body) {
    if (const json* v = Find(key)) {
      ObjectReader child(*v, Child(key));
      body(child);
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void Require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) SchemaFail(path, what);
}

std::string_view ToString(PerceptionMode m) {
  switch (m) {
    case PerceptionMode::kGrid: return "grid";
    case PerceptionMode::kStochastic: return "stochastic";
    case PerceptionMode::kInteractive: return "interactive";
  }
  return "grid";
}

std::string_view ToString(SamplerMode m) {
  switch (m) {
    case SamplerMode::kFixedPerEpisode: return "episode";
    case SamplerMode::kFixedPerRound: return "round";
    case SamplerMode::kStochastic: return "stochastic";
  }
  return "round";
}

void ValidateTrain(const TrainConfig& t, int horizon) {
  Require(t.batch_size >= 1, "$.train.batch_size", "must be >= 1");
  Require(t.epochs >= 1, "$.train.epochs", "must be >= 1");
  Require(t.learning_rate > 0.0, "$.train.learning_rate", "must be > 0");
  Require(t.beta1 > 0.0 && t.beta1 < 1.0, "$.train.betas", "must lie in (0, 1)");
  Require(t.beta2 > 0.0 && t.beta2 < 1.0, "$.train.betas", "must lie in (0, 1)");
  Require(t.adam_eps > 0.0, "$.train.eps", "must be > 0");
  Require(t.weight_decay >= 0.0, "$.train.weight_decay", "must be >= 0");
  Require(t.warmup_steps >= 0, "$.train.warmup_steps", "must be >= 0");
  Require(t.ema_power > 0.0, "$.train.ema.power", "must be > 0");
  Require(t.ema_inv_gamma > 0.0, "$.train.ema.inv_gamma", "must be > 0");
  Require(t.ema_max > 0.0 && t.ema_max <= 1.0, "$.train.ema.max_value",
          "must lie in (0, 1]");
  Require(t.shift_steps_upperbound >= 1 && t.shift_steps_upperbound < horizon,
          "$.train.shift_steps_upperbound", "must lie in [1, horizon)");
  Require(t.timesteps >= 1, "$.train.timesteps", "must be >= 1");
  Require(t.hidden >= 1, "$.train.hidden", "must be >= 1");
  Require(t.time_embed_dim >= 2, "$.train.time_embed_dim", "must be >= 2");
  Require(t.cond_embed_dim >= 1, "$.train.cond_embed_dim", "must be >= 1");
}

void ReadTrain(ObjectReader& t, TrainConfig* out) {
  TrainConfig& tc = *out;
  t.Integer("batch_size", &tc.batch_size);
  t.Integer("epochs", &tc.epochs);
  t.Number("learning_rate", &tc.learning_rate);
  if (const json* betas = t.Find("betas")) {
    if (!betas->is_array() || betas->size() != 2) {
      SchemaFail(t.Child("betas"), "expected [beta1, beta2]");
    }
    tc.beta1 = (*betas)[0].get<double>();
    tc.beta2 = (*betas)[1].get<double>();
  }
  t.Number("eps", &tc.adam_eps);
  t.Number("weight_decay", &tc.weight_decay);
  t.Integer("warmup_steps", &tc.warmup_steps);
  t.Object("ema", [&](ObjectReader& e) {
    e.Number("power", &tc.ema_power);
    e.Number("inv_gamma", &tc.ema_inv_gamma);
    e.Number("max_value", &tc.ema_max);
    e.Number("min_value", &tc.ema_min);
    e.Integer("update_after_step", &tc.ema_update_after_step);
  });
  t.Bool("timeline_shift", &tc.timeline_shift);
  t.Integer("shift_steps_upperbound", &tc.shift_steps_upperbound);
  t.Integer("timesteps", &tc.timesteps);
  std::string schedule = std::string(ToString(tc.beta_schedule));
  t.String("beta_schedule", &schedule);
  try {
    tc.beta_schedule = ParseBetaSchedule(schedule);
  } catch (const Error& e) {
    SchemaFail(t.Child("beta_schedule"), e.what());
  }
  t.Number("beta_start", &tc.beta_start);
  t.Number("beta_end", &tc.beta_end);
  t.Bool("clip_sample", &tc.clip_sample);
  t.Integer("hidden", &tc.hidden);
  t.Integer("time_embed_dim", &tc.time_embed_dim);
  t.Integer("cond_embed_dim", &tc.cond_embed_dim);
}

void Validate(const ExperimentConfig& c) {
  Require(c.success_threshold > 0.0, "$.success_threshold", "must be > 0");
  Require(c.max_rounds >= 1, "$.max_rounds", "must be >= 1");
  Require(c.horizon >= 2, "$.horizon", "must be >= 2");
  Require(c.dt > 0.0, "$.dt", "must be > 0");
  Require(c.jobs >= 1, "$.jobs", "must be >= 1");
  Require(!c.methods.empty(), "$.methods", "must list at least one method");
  Require(c.mu > 0.0, "$.env.mu", "must be > 0");
  Require(c.string_length > 0.0, "$.env.string_length", "must be > 0");
  Require(c.perturbation >= 0.0 && c.perturbation < 1.0, "$.env.perturbation",
          "must lie in [0, 1)");
  Require(c.perception_spread >= 0.0 && c.perception_spread < 1.0,
          "$.perception.spread", "must lie in [0, 1)");
  ValidateTrain(c.train, c.horizon);
  const PriorConfig& p = c.priors;
  Require(p.count >= 2, "$.priors.count", "must be >= 2");
  Require(p.candidate_factor >= 1, "$.priors.candidate_factor", "must be >= 1");
  Require(p.sigma >= 0.0, "$.priors.sigma", "must be >= 0");
  Require(p.min_separation >= 0.0, "$.priors.min_separation", "must be >= 0");
  Require(p.control_points >= 4, "$.priors.control_points", "must be >= 4");
  Require(p.timing_jitter >= 0, "$.priors.timing_jitter", "must be >= 0");
  Require(p.window_start - p.timing_jitter >= 0 &&
              p.window_end + p.timing_jitter < c.horizon &&
              p.window_start < p.window_end,
          "$.priors", "motion window plus jitter must fit inside the horizon");
  for (Method m : c.methods) {
    if (m == Method::kInn || m == Method::kInnAligned) {
      Require(p.count >= 3, "$.priors.count", "INN baselines need >= 3 priors");
    }
  }
  Require(c.goals.nx >= 1 && c.goals.ny >= 1, "$.goals.count", "must be >= 1");
  Require(c.goals.size.minCoeff() >= 0.0, "$.goals.size", "must be >= 0");
  const GprConfig& g = c.adapter.gpr;
  Require(g.amplitude > 0.0, "$.adapter.gpr.amplitude", "must be > 0");
  Require(g.length_scale_min > 0.0 && g.length_scale_min <= g.length_scale &&
              g.length_scale <= g.length_scale_max,
          "$.adapter.gpr", "length scale bounds must bracket the initial value");
  Require(g.noise > 0.0 && g.max_noise >= g.noise, "$.adapter.gpr.noise",
          "must satisfy 0 < noise <= max_noise");
  Require(g.restarts >= 1, "$.adapter.gpr.restarts", "must be >= 1");
}

}  // namespace

TaskKind ParseTask(std::string_view name) {
  if (name == "basketball") return TaskKind::kProjectile;
  if (name == "curling") return TaskKind::kSliding;
  if (name == "fishing") return TaskKind::kPendulum;
  throw Error(ErrorCode::kSchemaError,
              "$.task: unknown task \"" + std::string(name) + "\"");
}

ExperimentConfig DefaultConfig(TaskKind task) {
  ExperimentConfig c;
  c.task = task;
  switch (task) {
    case TaskKind::kProjectile:
      c.horizon = 140;
      c.goals.center = {1.05, 0.0};
      break;
    case TaskKind::kSliding:
      c.horizon = 200;
      c.priors.window_start = 40;
      c.priors.window_end = 160;
      c.goals.center = {0.65, 0.0};
      break;
    case TaskKind::kPendulum:
      c.horizon = 200;
      c.priors.window_start = 40;
      c.priors.window_end = 160;
      c.goals.center = {0.85, 0.0};
      break;
  }
  return c;
}

ExperimentConfig ParseConfig(const json& j) {
  if (!j.is_object()) SchemaFail("$", "expected an object");
  ExperimentConfig c;
  if (auto it = j.find("task"); it != j.end()) {
    if (!it->is_string()) SchemaFail("$.task", "expected a string");
    c = DefaultConfig(ParseTask(it->get<std::string>()));
  }
  {
    ObjectReader root(j, "$");
    root.Find("task");
    if (const json* m = root.Find("methods")) {
      if (!m->is_array()) SchemaFail("$.methods", "expected an array");
      c.methods.clear();
      for (const auto& name : *m) {
        if (!name.is_string()) SchemaFail("$.methods", "expected strings");
        try {
          c.methods.push_back(ParseMethod(name.get<std::string>()));
        } catch (const Error& e) {
          SchemaFail("$.methods", e.what());
        }
      }
    }
    root.Integer("seed", &c.seed);
    root.Integer("horizon", &c.horizon);
    root.Number("dt", &c.dt);
    root.Integer("max_rounds", &c.max_rounds);
    root.Number("success_threshold", &c.success_threshold);
    root.Integer("jobs", &c.jobs);
    root.String("out", &c.out_dir);
    std::string sampler = std::string(ToString(c.sampler));
    root.String("sampler", &sampler);
    if (sampler == "episode") {
      c.sampler = SamplerMode::kFixedPerEpisode;
    } else if (sampler == "round") {
      c.sampler = SamplerMode::kFixedPerRound;
    } else if (sampler == "stochastic") {
      c.sampler = SamplerMode::kStochastic;
    } else {
      SchemaFail("$.sampler",
                 "expected \"episode\", \"round\" or \"stochastic\"");
    }
    root.Object("env", [&](ObjectReader& env) {
      env.Number("mu", &c.mu);
      env.Number("string_length", &c.string_length);
      env.Number("perturbation", &c.perturbation);
      env.Integer("perturbation_seed", &c.perturbation_seed);
    });
    root.Object("perception", [&](ObjectReader& p) {
      std::string mode = std::string(ToString(c.perception));
      p.String("mode", &mode);
      if (mode == "grid") {
        c.perception = PerceptionMode::kGrid;
      } else if (mode == "stochastic") {
        c.perception = PerceptionMode::kStochastic;
      } else if (mode == "interactive") {
        c.perception = PerceptionMode::kInteractive;
      } else {
        SchemaFail(p.Child("mode"),
                   "expected \"grid\", \"stochastic\" or \"interactive\"");
      }
      p.Number("spread", &c.perception_spread);
    });
    root.Object("train", [&](ObjectReader& t) { ReadTrain(t, &c.train); });
    root.Object("priors", [&](ObjectReader& p) {
      p.Integer("count", &c.priors.count);
      p.Integer("candidate_factor", &c.priors.candidate_factor);
      p.Number("sigma", &c.priors.sigma);
      p.Number("min_separation", &c.priors.min_separation);
      p.Integer("control_points", &c.priors.control_points);
      p.Integer("window_start", &c.priors.window_start);
      p.Integer("window_end", &c.priors.window_end);
      p.Integer("timing_jitter", &c.priors.timing_jitter);
      p.Number("area_margin", &c.priors.area_margin);
    });
    root.Object("goals", [&](ObjectReader& g) {
      g.Pair("center", &c.goals.center);
      g.Pair("size", &c.goals.size);
      PlaneVector count(c.goals.nx, c.goals.ny);
      if (const json* n = g.Find("count")) {
        if (!n->is_array() || n->size() != 2 || !(*n)[0].is_number_integer() ||
            !(*n)[1].is_number_integer()) {
          SchemaFail(g.Child("count"), "expected [nx, ny] integers");
        }
        c.goals.nx = (*n)[0].get<int>();
        c.goals.ny = (*n)[1].get<int>();
      }
    });
    root.Object("adapter", [&](ObjectReader& a) {
      a.Integer("tail_cap", &c.adapter.tail_cap);
      a.Number("condition_margin", &c.adapter.condition_margin);
      a.Object("gpr", [&](ObjectReader& g) {
        GprConfig& gc = c.adapter.gpr;
        g.Number("amplitude", &gc.amplitude);
        g.Number("length_scale", &gc.length_scale);
        g.Number("length_scale_min", &gc.length_scale_min);
        g.Number("length_scale_max", &gc.length_scale_max);
        g.Number("noise", &gc.noise);
        g.Number("max_noise", &gc.max_noise);
        g.Integer("restarts", &gc.restarts);
        g.Bool("optimize", &gc.optimize);
      });
    });
  }
  c.train.seed = c.seed;
  Validate(c);
  return c;
}

TrainConfig ParseTrainConfig(const json& train, std::uint64_t seed,
                             int horizon) {
  TrainConfig tc;
  if (!train.is_object()) SchemaFail("$.train", "expected an object");
  {
    ObjectReader t(train, "$.train");
    ReadTrain(t, &tc);
  }
  tc.seed = seed;
  ValidateTrain(tc, horizon);
  return tc;
}

ExperimentConfig ParseConfigText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return ParseConfig(j);
}

ExperimentConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

json ConfigToJson(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(ToString(m)));
  const TrainConfig& t = c.train;
  const GprConfig& g = c.adapter.gpr;
  return {
      {"task", std::string(TaskName(c.task))},
      {"methods", methods},
      {"seed", c.seed},
      {"horizon", c.horizon},
      {"dt", c.dt},
      {"max_rounds", c.max_rounds},
      {"success_threshold", c.success_threshold},
      {"jobs", c.jobs},
      {"out", c.out_dir},
      {"sampler", std::string(ToString(c.sampler))},
      {"env",
       {{"mu", c.mu},
        {"string_length", c.string_length},
        {"perturbation", c.perturbation},
        {"perturbation_seed", c.perturbation_seed}}},
      {"perception",
       {{"mode", std::string(ToString(c.perception))},
        {"spread", c.perception_spread}}},
      {"train",
       {{"batch_size", t.batch_size},
        {"epochs", t.epochs},
        {"learning_rate", t.learning_rate},
        {"betas", {t.beta1, t.beta2}},
        {"eps", t.adam_eps},
        {"weight_decay", t.weight_decay},
        {"warmup_steps", t.warmup_steps},
        {"ema",
         {{"power", t.ema_power},
          {"inv_gamma", t.ema_inv_gamma},
          {"max_value", t.ema_max},
          {"min_value", t.ema_min},
          {"update_after_step", t.ema_update_after_step}}},
        {"timeline_shift", t.timeline_shift},
        {"shift_steps_upperbound", t.shift_steps_upperbound},
        {"timesteps", t.timesteps},
        {"beta_schedule", std::string(ToString(t.beta_schedule))},
        {"beta_start", t.beta_start},
        {"beta_end", t.beta_end},
        {"clip_sample", t.clip_sample},
        {"hidden", t.hidden},
        {"time_embed_dim", t.time_embed_dim},
        {"cond_embed_dim", t.cond_embed_dim}}},
      {"priors",
       {{"count", c.priors.count},
        {"candidate_factor", c.priors.candidate_factor},
        {"sigma", c.priors.sigma},
        {"min_separation", c.priors.min_separation},
        {"area_margin", c.priors.area_margin},
        {"control_points", c.priors.control_points},
        {"window_start", c.priors.window_start},
        {"window_end", c.priors.window_end},
        {"timing_jitter", c.priors.timing_jitter}}},
      {"goals",
       {{"center", {c.goals.center.x(), c.goals.center.y()}},
        {"size", {c.goals.size.x(), c.goals.size.y()}},
        {"count", {c.goals.nx, c.goals.ny}}}},
      {"adapter",
       {{"tail_cap", c.adapter.tail_cap},
        {"condition_margin", c.adapter.condition_margin},
        {"gpr",
         {{"amplitude", g.amplitude},
          {"length_scale", g.length_scale},
          {"length_scale_min", g.length_scale_min},
          {"length_scale_max", g.length_scale_max},
          {"noise", g.noise},
          {"max_noise", g.max_noise},
          {"restarts", g.restarts},
          {"optimize", g.optimize}}}}},
  };
}

EnvModel MakeEnv(const ExperimentConfig& cfg) {
  switch (cfg.task) {
    case TaskKind::kProjectile: return EnvModel::Projectile();
    case TaskKind::kSliding: return EnvModel::Sliding(cfg.mu);
    case TaskKind::kPendulum: return EnvModel::Pendulum(cfg.string_length);
  }
  return EnvModel::Projectile();
}

EnvModel MakeStage2Env(const ExperimentConfig& cfg) {
  return MakeEnv(cfg).Perturbed(cfg.perturbation, cfg.perturbation_seed);
}

PlanShape MakePlanShape(const ExperimentConfig& cfg) {
  return {cfg.horizon, ArmModel::kJoints, cfg.dt};
}

TrainConfig TrainConfigFor(const ExperimentConfig& cfg, Method method) {
  TrainConfig t = cfg.train;
  t.seed = cfg.seed;
  if (method == Method::kAdapNoShift) t.timeline_shift = false;
  return t;
}

AdapterConfig AdapterConfigFor(const ExperimentConfig& cfg, Method method) {
  AdapterConfig a = cfg.adapter;
  if (method == Method::kAdapNoForget) a.tail_cap = -1;
  return a;
}

}  // namespace adap
