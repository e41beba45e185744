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

#ifndef ADAP_REPORT_HPP_
#define ADAP_REPORT_HPP_

#include <cstdint>
#include <string>

#include "adap/orchestrator.hpp"

namespace adap {

std::string CheckpointFileName(std::uint64_t planner_key);

// results.csv body: header plus one row per (method, round).
std::string ResultsCsv(const ExperimentReport& report);
std::string CurvesSvg(const ExperimentReport& report);
nlohmann::json EpisodesJson(const ExperimentReport& report);
std::string TrainingCsv(const TrainingLog& log);

// Writes results.csv, episodes.json, curves.svg, demos.json and one
// training_<method>.csv per diffusion method into `dir` (created if needed).
void WriteReport(const ExperimentReport& report, const std::string& dir);

void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

}  // namespace adap

#endif  // ADAP_REPORT_HPP_
