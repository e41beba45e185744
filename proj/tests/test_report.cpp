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
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "adap/report.hpp"
#include "doctest.h"

using namespace adap;

namespace {

ExperimentReport Fake() {
  ExperimentReport r;
  r.config.max_rounds = 3;
  r.config.methods = {Method::kAdap, Method::kInn};
  for (Method m : r.config.methods) {
    MethodReport mr;
    mr.method = m;
    mr.prior_count = 6;
    for (int g = 0; g < 4; ++g) {
      EpisodeOutcome e;
      e.goal_index = g;
      e.stage1_trials = 6;
      if (g < (m == Method::kAdap ? 3 : 1)) e.success_round = g + 1;
      mr.episodes.push_back(e);
    }
    mr.success_rate = SuccessCurve(mr.episodes, 3);
    mr.mean_rounds_to_success = m == Method::kAdap ? 2.0 : 1.0;
    mr.mean_total_trials = 6 + mr.mean_rounds_to_success;
    if (m == Method::kAdap) {
      mr.planner_key = 0x12ab;
      mr.training.epoch_loss = {1.0, 0.5};
    }
    r.methods.push_back(mr);
  }
  return r;
}

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Minimal XML balance check: every start tag is closed in order.
bool Balanced(const std::string& xml) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = xml.find('<', i)) != std::string::npos) {
    const std::size_t j = xml.find('>', i);
    if (j == std::string::npos) return false;
    std::string tag = xml.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    const std::string name = tag.substr(tag[0] == '/', tag.find_first_of(" \t\n") - (tag[0] == '/'));
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

std::size_t Count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t i = s.find(needle); i != std::string::npos; i = s.find(needle, i + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("results csv") {
  const std::vector<std::string> lines = Lines(ResultsCsv(Fake()));
  REQUIRE(lines.size() == 1 + 2 * 3);
  CHECK(lines[0] == "method,round,success_rate,mean_rounds_to_success");
  CHECK(lines[1] == "adap,1,0.250000,2.000000");
  CHECK(lines[3] == "adap,3,0.750000,2.000000");
  CHECK(lines[6] == "inn,3,0.250000,1.000000");
  ExperimentReport r = Fake();
  r.methods[1].mean_rounds_to_success = std::nan("");
  CHECK(Lines(ResultsCsv(r))[4] == "inn,1,0.250000,");
}

TEST_CASE("curves svg") {
  const std::string svg = CurvesSvg(Fake());
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(Balanced(svg));
  CHECK(Count(svg, "<polyline") == 2);
  CHECK(svg.find("data-method=\"adap\"") != std::string::npos);
  CHECK(svg.find("data-method=\"inn\"") != std::string::npos);
}

TEST_CASE("episodes json") {
  const nlohmann::json j = EpisodesJson(Fake());
  REQUIRE(j["methods"].size() == 2);
  CHECK(j["methods"][0]["method"] == "adap");
  CHECK(j["methods"][0]["episodes"].size() == 4);
  CHECK(j["methods"][0]["checkpoint"] == CheckpointFileName(0x12ab));
  CHECK(j["methods"][0]["mean_total_trials"] == 8.0);
  CHECK(CheckpointFileName(0x12ab) == "planner_00000000000012ab.adap");
}

TEST_CASE("write report") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "adap_test_report";
  std::filesystem::remove_all(dir);
  WriteReport(Fake(), dir.string());
  for (const char* f : {"results.csv", "curves.svg", "episodes.json", "demos.json",
                        "training_adap.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  CHECK_FALSE(std::filesystem::exists(dir / "training_inn.csv"));
  CHECK(ReadTextFile((dir / "results.csv").string()) == ResultsCsv(Fake()));
  CHECK(Lines(TrainingCsv(Fake().methods[0].training)).size() == 3);
  std::filesystem::remove_all(dir);
}
