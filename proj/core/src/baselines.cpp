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

#include "adap/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "adap/planner.hpp"

namespace adap {

Method ParseMethod(std::string_view name) {
  if (name == "adap") return Method::kAdap;
  if (name == "adap_no_shift") return Method::kAdapNoShift;
  if (name == "adap_no_forget") return Method::kAdapNoForget;
  if (name == "inn") return Method::kInn;
  if (name == "inn_aligned") return Method::kInnAligned;
  throw Error(ErrorCode::kSchemaError,
              "unknown method '" + std::string(name) + "'");
}

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kAdap: return "adap";
    case Method::kAdapNoShift: return "adap_no_shift";
    case Method::kAdapNoForget: return "adap_no_forget";
    case Method::kInn: return "inn";
    case Method::kInnAligned: return "inn_aligned";
  }
  return "unknown";
}

bool UsesDiffusion(Method method) {
  return method == Method::kAdap || method == Method::kAdapNoShift ||
         method == Method::kAdapNoForget;
}

InnWeights SolveInnWeights(const ConditionVector& c,
                           const LabeledDemoSet& demos, int neighbors) {
  if (neighbors != 3 || demos.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "INN needs exactly 3 neighbors and |D_e| >= 3");
  }
  std::vector<int> order(demos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (demos.entries[a].result - c).squaredNorm() <
           (demos.entries[b].result - c).squaredNorm();
  });
  InnWeights out;
  for (int i = 0; i < 3; ++i) out.neighbors[i] = order[i];

  Eigen::Matrix3d system;
  for (int i = 0; i < 3; ++i) {
    const ResultVector& r = demos.entries[out.neighbors[i]].result;
    system.col(i) << r.x(), r.y(), 1.0;
  }
  const Eigen::Vector3d rhs(c.x(), c.y(), 1.0);
  // Relative singularity test: triangle area against its edge scale.
  const double scale = std::max(
      {(system.col(1) - system.col(0)).head<2>().squaredNorm(),
       (system.col(2) - system.col(0)).head<2>().squaredNorm(),
       (system.col(2) - system.col(1)).head<2>().squaredNorm(), 1e-300});
  if (std::abs(system.determinant()) > 1e-9 * scale) {
    out.weights = system.partialPivLu().solve(rhs);
    return out;
  }
  out.fallback = true;
  for (int i = 0; i < 3; ++i) {
    const double d = (demos.entries[out.neighbors[i]].result - c).norm();
    if (d == 0.0) {
      out.weights.setZero();
      out.weights[i] = 1.0;
      return out;
    }
    out.weights[i] = 1.0 / d;
  }
  out.weights /= out.weights.sum();
  return out;
}

InnPlanner::InnPlanner(LabeledDemoSet demos, JointLimits limits)
    : demos_(std::move(demos)), limits_(std::move(limits)) {
  if (demos_.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "INN needs at least 3 demos");
  }
}

ActionPlan InnPlanner::Plan(const ConditionVector& c) const {
  const InnWeights w = SolveInnWeights(c, demos_);
  ActionPlan plan{FrameMatrix::Zero(demos_.shape.horizon, demos_.shape.joints),
                  demos_.shape.dt};
  for (int i = 0; i < 3; ++i) {
    plan.frames += w.weights[i] * demos_.entries[w.neighbors[i]].plan.frames;
  }
  return ClampToLimits(std::move(plan), limits_);
}

LabeledDemoSet AlignDataset(const LabeledDemoSet& demos, const ArmModel& arm) {
  std::vector<int> peaks;
  peaks.reserve(demos.size());
  for (const DemoEntry& e : demos.entries) {
    peaks.push_back(PeakSpeedFrame(ComputeToolPath(e.plan, arm)));
  }
  std::vector<int> sorted = peaks;
  std::sort(sorted.begin(), sorted.end());
  const int median = sorted.empty() ? 0 : sorted[(sorted.size() - 1) / 2];

  LabeledDemoSet out = demos;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const int shift = median - peaks[i];
    if (shift != 0) {
      out.entries[i].plan.frames = ShiftFrames(demos.entries[i].plan.frames, shift);
    }
  }
  return out;
}

}  // namespace adap
