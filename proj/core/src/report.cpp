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

#include "adap/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adap {

namespace {

std::string Fixed(double v, int digits = 6) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf"};

}  // namespace

std::string CheckpointFileName(std::uint64_t planner_key) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "planner_%016llx.adap",
                static_cast<unsigned long long>(planner_key));
  return buf;
}

std::string ResultsCsv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "method,round,success_rate,mean_rounds_to_success\n";
  for (const MethodReport& m : report.methods) {
    for (std::size_t r = 0; r < m.success_rate.size(); ++r) {
      os << ToString(m.method) << ',' << r + 1 << ','
         << Fixed(m.success_rate[r]) << ','
         << Fixed(m.mean_rounds_to_success) << '\n';
    }
  }
  return os.str();
}

std::string CurvesSvg(const ExperimentReport& report) {
  const double w = 640, h = 400, left = 60, right = 150, top = 20,
               bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  const int rounds = report.config.max_rounds;
  auto px = [&](int round) {
    return rounds > 1 ? left + pw * (round - 1) / (rounds - 1) : left;
  };
  auto py = [&](double rate) { return top + ph * (1.0 - rate); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
     << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\""
     << left + pw << "\" y2=\"" << top + ph << "\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << top + ph << "\"/>\n</g>\n<g id=\"ticks\">\n";
  for (int r = 1; r <= rounds; ++r) {
    os << "<text x=\"" << Fixed(px(r), 2) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << r << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double rate = i / 5.0;
    os << "<text x=\"" << left - 8 << "\" y=\"" << Fixed(py(rate) + 4, 2)
       << "\" text-anchor=\"end\">" << Fixed(rate, 1) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\">round</text>\n"
     << "<text x=\"15\" y=\"" << top + ph / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << top + ph / 2
     << ")\">success rate</text>\n</g>\n<g id=\"series\">\n";
  int k = 0;
  for (const MethodReport& m : report.methods) {
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline data-method=\"" << ToString(m.method)
       << "\" fill=\"none\" stroke-width=\"2\" stroke=\"" << color
       << "\" points=\"";
    for (std::size_t r = 0; r < m.success_rate.size(); ++r) {
      if (r) os << ' ';
      os << Fixed(px(static_cast<int>(r) + 1), 2) << ','
         << Fixed(py(m.success_rate[r]), 2);
    }
    os << "\"/>\n<text x=\"" << left + pw + 10 << "\" y=\"" << top + 16 * (k + 1)
       << "\" fill=\"" << color << "\">" << ToString(m.method) << "</text>\n";
    ++k;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

nlohmann::json EpisodesJson(const ExperimentReport& report) {
  nlohmann::json methods = nlohmann::json::array();
  for (const MethodReport& m : report.methods) {
    nlohmann::json episodes = nlohmann::json::array();
    for (const EpisodeOutcome& e : m.episodes) episodes.push_back(EpisodeToJson(e));
    nlohmann::json j = {{"method", std::string(ToString(m.method))},
                        {"prior_count", m.prior_count},
                        {"success_rate", m.success_rate},
                        {"episodes", std::move(episodes)}};
    j["mean_rounds_to_success"] =
        std::isfinite(m.mean_rounds_to_success)
            ? nlohmann::json(m.mean_rounds_to_success)
            : nlohmann::json();
    j["mean_total_trials"] = std::isfinite(m.mean_total_trials)
                                 ? nlohmann::json(m.mean_total_trials)
                                 : nlohmann::json();
    if (m.planner_key) {
      j["planner_key"] = *m.planner_key;
      j["checkpoint"] = CheckpointFileName(*m.planner_key);
    } else {
      j["planner_key"] = nullptr;
      j["checkpoint"] = nullptr;
    }
    methods.push_back(std::move(j));
  }
  return {{"seed", report.config.seed},
          {"config", ConfigToJson(report.config)},
          {"demos", "demos.json"},
          {"methods", std::move(methods)}};
}

std::string TrainingCsv(const TrainingLog& log) {
  std::ostringstream os;
  os << "epoch,loss\n";
  for (std::size_t i = 0; i < log.epoch_loss.size(); ++i) {
    os << i + 1 << ',' << Fixed(log.epoch_loss[i], 9) << '\n';
  }
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteReport(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  WriteTextFile((root / "results.csv").string(), ResultsCsv(report));
  WriteTextFile((root / "curves.svg").string(), CurvesSvg(report));
  WriteTextFile((root / "episodes.json").string(),
                EpisodesJson(report).dump(1) + "\n");
  WriteTextFile((root / "demos.json").string(),
                DemoSetToJson(report.demos).dump() + "\n");
  for (const MethodReport& m : report.methods) {
    if (!m.training.epoch_loss.empty()) {
      WriteTextFile(
          (root / ("training_" + std::string(ToString(m.method)) + ".csv"))
              .string(),
          TrainingCsv(m.training));
    }
  }
}

}  // namespace adap
