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

#include "adap/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adap {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kHorizonMismatch: return "HorizonMismatch";
    case ErrorCode::kJointCountMismatch: return "JointCountMismatch";
    case ErrorCode::kJointLimitViolation: return "JointLimitViolation";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kNoImpact: return "NoImpact";
    case ErrorCode::kDegenerateMotion: return "DegenerateMotion";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kNotTrained: return "NotTrained";
    case ErrorCode::kSingularKernel: return "SingularKernel";
    case ErrorCode::kUninitialized: return "Uninitialized";
    case ErrorCode::kDegenerateNeighbors: return "DegenerateNeighbors";
    case ErrorCode::kInsufficientDiversity: return "InsufficientDiversity";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kAborted: return "Aborted";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

struct PlanFault {
  ErrorCode code;
  std::string message;
};

bool FindFault(const ActionPlan& plan, const PlanShape& shape,
               const JointLimits& limits, PlanFault* fault) {
  if (plan.horizon() != shape.horizon) {
    std::ostringstream os;
    os << "plan has " << plan.horizon() << " frames, expected "
       << shape.horizon;
    *fault = {ErrorCode::kHorizonMismatch, os.str()};
    return true;
  }
  if (plan.joints() != shape.joints || limits.size() != shape.joints) {
    std::ostringstream os;
    os << "plan has " << plan.joints() << " joints, expected "
       << shape.joints;
    *fault = {ErrorCode::kJointCountMismatch, os.str()};
    return true;
  }
  if (!(plan.dt > 0.0) || !std::isfinite(plan.dt)) {
    *fault = {ErrorCode::kNonFinite, "dt must be finite and positive"};
    return true;
  }
  for (int t = 0; t < plan.horizon(); ++t) {
    for (int j = 0; j < plan.joints(); ++j) {
      const double v = plan.frames(t, j);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "frame " << t << " joint " << j << " is not finite";
        *fault = {ErrorCode::kNonFinite, os.str()};
        return true;
      }
    }
  }
  for (int t = 0; t < plan.horizon(); ++t) {
    for (int j = 0; j < plan.joints(); ++j) {
      const double v = plan.frames(t, j);
      if (!limits.Contains(j, v)) {
        std::ostringstream os;
        os << "frame " << t << " joint " << j << " value " << v
           << " outside [" << limits.lower[j] << ", " << limits.upper[j]
           << "]";
        *fault = {ErrorCode::kJointLimitViolation, os.str()};
        return true;
      }
    }
  }
  return false;
}

}  // namespace

void ValidatePlan(const ActionPlan& plan, const PlanShape& shape,
                  const JointLimits& limits) {
  PlanFault fault;
  if (FindFault(plan, shape, limits, &fault)) {
    throw Error(fault.code, fault.message);
  }
}

std::string CheckPlan(const ActionPlan& plan, const PlanShape& shape,
                      const JointLimits& limits) {
  PlanFault fault;
  if (FindFault(plan, shape, limits, &fault)) {
    return std::string(ToString(fault.code)) + ": " + fault.message;
  }
  return {};
}

ActionPlan ClampToLimits(ActionPlan plan, const JointLimits& limits) {
  for (int t = 0; t < plan.horizon(); ++t) {
    for (int j = 0; j < plan.joints(); ++j) {
      plan.frames(t, j) =
          std::clamp(plan.frames(t, j), limits.lower[j], limits.upper[j]);
    }
  }
  return plan;
}

// RangeNormalizer -----------------------------------------------------------

RangeNormalizer::RangeNormalizer(Eigen::VectorXd min, Eigen::VectorXd max,
                                 double range_floor)
    : min_(std::move(min)), max_(std::move(max)), range_floor_(range_floor) {
  if (min_.size() != max_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "normalizer min/max size differ");
  }
  for (int d = 0; d < min_.size(); ++d) {
    if (!(max_[d] >= min_[d])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "normalizer max < min in dim " + std::to_string(d));
    }
    if (max_[d] - min_[d] <= 0.0 && range_floor_ <= 0.0) {
      throw Error(ErrorCode::kDegenerateRange,
                  "zero range in dim " + std::to_string(d) +
                      " with range floor disabled");
    }
  }
}

RangeNormalizer RangeNormalizer::Fit(
    const Eigen::Ref<const FrameMatrix>& samples, double range_floor) {
  if (samples.rows() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "cannot fit normalizer on nothing");
  }
  return RangeNormalizer(samples.colwise().minCoeff().transpose(),
                         samples.colwise().maxCoeff().transpose(),
                         range_floor);
}

double RangeNormalizer::Scale(int d) const {
  return std::max(0.5 * (max_[d] - min_[d]), range_floor_);
}

FrameMatrix RangeNormalizer::NormalizeRows(
    const Eigen::Ref<const FrameMatrix>& rows) const {
  FrameMatrix out(rows.rows(), rows.cols());
  for (int d = 0; d < dims(); ++d) {
    const double center = 0.5 * (max_[d] + min_[d]);
    const double scale = Scale(d);
    out.col(d) = (rows.col(d).array() - center) / scale;
  }
  return out;
}

FrameMatrix RangeNormalizer::DenormalizeRows(
    const Eigen::Ref<const FrameMatrix>& rows) const {
  FrameMatrix out(rows.rows(), rows.cols());
  for (int d = 0; d < dims(); ++d) {
    const double center = 0.5 * (max_[d] + min_[d]);
    const double scale = Scale(d);
    out.col(d) = rows.col(d).array() * scale + center;
  }
  return out;
}

Eigen::VectorXd RangeNormalizer::Normalize(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (int d = 0; d < dims(); ++d) {
    out[d] = (v[d] - 0.5 * (max_[d] + min_[d])) / Scale(d);
  }
  return out;
}

Eigen::VectorXd RangeNormalizer::Denormalize(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (int d = 0; d < dims(); ++d) {
    out[d] = v[d] * Scale(d) + 0.5 * (max_[d] + min_[d]);
  }
  return out;
}

PlanNormalizer FitPlanNormalizer(const LabeledDemoSet& demos,
                                 double range_floor) {
  if (demos.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no plans to fit normalizer");
  }
  const int joints = demos.entries.front().plan.joints();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(
      joints, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (const DemoEntry& e : demos.entries) {
    lo = lo.cwiseMin(e.plan.frames.colwise().minCoeff().transpose());
    hi = hi.cwiseMax(e.plan.frames.colwise().maxCoeff().transpose());
  }
  return RangeNormalizer(lo, hi, range_floor);
}

ActionPlan NormalizePlan(const ActionPlan& plan, const PlanNormalizer& norm) {
  return {norm.NormalizeRows(plan.frames), plan.dt};
}

ActionPlan DenormalizePlan(const ActionPlan& plan, const PlanNormalizer& norm) {
  return {norm.DenormalizeRows(plan.frames), plan.dt};
}

// JSON ----------------------------------------------------------------------

nlohmann::json PlanToJson(const ActionPlan& plan) {
  nlohmann::json rows = nlohmann::json::array();
  for (int t = 0; t < plan.horizon(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < plan.joints(); ++j) row.push_back(plan.frames(t, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ActionPlan PlanFromJson(const nlohmann::json& j, double dt) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(ErrorCode::kParseError, "plan must be a nonempty 2-D array");
  }
  const auto rows = static_cast<int>(j.size());
  const auto cols = static_cast<int>(j.front().size());
  ActionPlan plan{FrameMatrix(rows, cols), dt};
  for (int t = 0; t < rows; ++t) {
    if (static_cast<int>(j[t].size()) != cols) {
      throw Error(ErrorCode::kParseError,
                  "ragged plan at frame " + std::to_string(t));
    }
    for (int c = 0; c < cols; ++c) plan.frames(t, c) = j[t][c].get<double>();
  }
  return plan;
}

nlohmann::json DemoSetToJson(const LabeledDemoSet& demos) {
  nlohmann::json j;
  j["h"] = demos.shape.horizon;
  j["j"] = demos.shape.joints;
  j["dt"] = demos.shape.dt;
  j["entries"] = nlohmann::json::array();
  for (const DemoEntry& e : demos.entries) {
    j["entries"].push_back(
        {{"plan", PlanToJson(e.plan)}, {"result", {e.result.x(), e.result.y()}}});
  }
  return j;
}

LabeledDemoSet DemoSetFromJson(const nlohmann::json& j) {
  try {
    LabeledDemoSet demos;
    demos.shape.horizon = j.at("h").get<int>();
    demos.shape.joints = j.at("j").get<int>();
    demos.shape.dt = j.at("dt").get<double>();
    for (const auto& e : j.at("entries")) {
      DemoEntry entry;
      entry.plan = PlanFromJson(e.at("plan"), demos.shape.dt);
      const auto& r = e.at("result");
      if (r.size() != kResultDim) {
        throw Error(ErrorCode::kParseError, "result must have 2 entries");
      }
      entry.result = {r[0].get<double>(), r[1].get<double>()};
      if (entry.plan.horizon() != demos.shape.horizon ||
          entry.plan.joints() != demos.shape.joints) {
        throw Error(ErrorCode::kHorizonMismatch,
                    "demo plan shape differs from set header");
      }
      demos.entries.push_back(std::move(entry));
    }
    return demos;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

nlohmann::json VectorToJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFromJson(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<int>(values.size()));
}

}  // namespace adap
