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


#include <string>

#include "adap/config.hpp"
#include "adap/error.hpp"
#include "doctest.h"

using namespace adap;

namespace {

std::string SchemaMessage(const std::string& text) {
  try {
    ParseConfigText(text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) return e.what();
    return "wrong code: " + std::string(e.what());
  }
  return "accepted";
}

}  // namespace

TEST_CASE("empty object gives the full default config") {
  const ExperimentConfig c = ParseConfigText("{}");
  CHECK(c.train.learning_rate == 5e-4);
  CHECK(c.train.timesteps == 100);
  CHECK(c.train.epochs == 3000);
  CHECK(c.train.warmup_steps == 500);
  CHECK(c.train.batch_size == 256);
  CHECK(c.train.ema_power == 0.75);
  CHECK(c.adapter.gpr.noise == 1e-6);
  CHECK(c.adapter.gpr.restarts == 5);
  CHECK(c.adapter.tail_cap == 2);
  CHECK(c.priors.count == 6);
  CHECK(c.max_rounds == 10);
  CHECK(c.success_threshold == 0.03);
  CHECK(c.goals.nx * c.goals.ny == 100);
  CHECK(c.methods.size() == 5);
  CHECK(c.sampler == SamplerMode::kFixedPerRound);
}

TEST_CASE("schema errors carry the key path") {
  CHECK(SchemaMessage(R"({"foo": 1})").find("foo") != std::string::npos);
  CHECK(SchemaMessage(R"({"train": {"ema": {"powr": 1}}})").find("$.train.ema.powr") !=
        std::string::npos);
  CHECK(SchemaMessage(R"({"success_threshold": -1})").find("success_threshold") !=
        std::string::npos);
  CHECK(SchemaMessage(R"({"max_rounds": 0})") != "accepted");
  CHECK(SchemaMessage(R"({"task": "bowling"})") != "accepted");
  CHECK(SchemaMessage(R"({"methods": ["adap", "rl"]})") != "accepted");
  CHECK(SchemaMessage(R"({"seed": "zero"})") != "accepted");
  CHECK(SchemaMessage(R"({"priors": {"timing_jitter": 40}})") != "accepted");
  CHECK(SchemaMessage(R"({"perception": {"mode": "vlm"}})") != "accepted");
}

TEST_CASE("malformed json is a parse error") {
  try {
    ParseConfigText("{\"seed\": ");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
  }
}

TEST_CASE("task defaults and overrides") {
  const ExperimentConfig c = ParseConfigText(
      R"({"task": "curling", "env": {"mu": 0.3}, "seed": 9, "sampler": "stochastic"})");
  CHECK(c.task == TaskKind::kSliding);
  CHECK(c.horizon == 200);
  CHECK(c.mu == 0.3);
  CHECK(c.seed == 9);
  CHECK(c.sampler == SamplerMode::kStochastic);
  CHECK(std::get<SlidingParams>(MakeEnv(c).dynamics).mu == 0.3);
  CHECK(ParseTask("fishing") == TaskKind::kPendulum);
  CHECK(ParseTask("basketball") == TaskKind::kProjectile);
}

TEST_CASE("config survives a json roundtrip") {
  ExperimentConfig c = ParseConfigText(
      R"({"task": "fishing", "methods": ["inn"], "train": {"epochs": 10},
          "goals": {"count": [3, 4]}, "perception": {"mode": "stochastic"}})");
  const nlohmann::json j = ConfigToJson(c);
  CHECK(ConfigToJson(ParseConfig(j)) == j);
  CHECK(j["train"]["epochs"] == 10);
}

TEST_CASE("method specializations") {
  const ExperimentConfig c;
  CHECK(TrainConfigFor(c, Method::kAdap).timeline_shift);
  CHECK_FALSE(TrainConfigFor(c, Method::kAdapNoShift).timeline_shift);
  CHECK(AdapterConfigFor(c, Method::kAdap).tail_cap == 2);
  CHECK(AdapterConfigFor(c, Method::kAdapNoForget).tail_cap < 0);
  CHECK(TrainConfigFor(c, Method::kAdap).seed == c.train.seed);
}

TEST_CASE("perturbation only touches the stage-2 environment") {
  ExperimentConfig c;
  c.perturbation = 0.1;
  CHECK(MakeEnv(c).arm.link_lengths == ArmModel{}.link_lengths);
  CHECK(MakeStage2Env(c).arm.link_lengths != ArmModel{}.link_lengths);
  c.perturbation = 0.0;
  CHECK(MakeStage2Env(c).arm.link_lengths == ArmModel{}.link_lengths);
}
