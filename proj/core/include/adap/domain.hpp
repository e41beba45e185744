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

#ifndef ADAP_DOMAIN_HPP_
#define ADAP_DOMAIN_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "adap/error.hpp"

namespace adap {

// Frames are stored frame-major so that a plan flattens to [a_0, a_1, ...].
using FrameMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Table-plane vectors (k = 2). The aliases document intent at call sites.
using PlaneVector = Eigen::Vector2d;
using ResultVector = PlaneVector;
using ErrorVector = PlaneVector;
using ConditionVector = PlaneVector;
using GoalVector = PlaneVector;

inline constexpr int kResultDim = 2;

struct JointLimits {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int size() const { return static_cast<int>(lower.size()); }
  bool Contains(int joint, double value) const {
    return value >= lower[joint] && value <= upper[joint];
  }
};

// A complete open-loop plan: H frames of J joint positions, dt seconds apart.
struct ActionPlan {
  FrameMatrix frames;
  double dt = 0.02;

  int horizon() const { return static_cast<int>(frames.rows()); }
  int joints() const { return static_cast<int>(frames.cols()); }
};

struct PlanShape {
  int horizon = 140;
  int joints = 4;
  double dt = 0.02;

  bool operator==(const PlanShape&) const = default;
};

struct DemoEntry {
  ActionPlan plan;
  ResultVector result = ResultVector::Zero();
};

// D_e: plans paired with their perceived rollout results.
struct LabeledDemoSet {
  PlanShape shape;
  std::vector<DemoEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// Throws Error{kNonFinite | kHorizonMismatch | kJointCountMismatch |
// kJointLimitViolation}; the message names the offending frame and joint.
void ValidatePlan(const ActionPlan& plan, const PlanShape& shape,
                  const JointLimits& limits);

// Same checks, reported as a value. Empty string means ok.
std::string CheckPlan(const ActionPlan& plan, const PlanShape& shape,
                      const JointLimits& limits);

ActionPlan ClampToLimits(ActionPlan plan, const JointLimits& limits);

// Per-dimension affine map of [min, max] onto [-1, 1].
class RangeNormalizer {
 public:
  static constexpr double kDefaultRangeFloor = 1e-6;

  RangeNormalizer() = default;
  RangeNormalizer(Eigen::VectorXd min, Eigen::VectorXd max,
                  double range_floor = kDefaultRangeFloor);

  // Fits over the rows of `samples` (one row per observation).
  static RangeNormalizer Fit(const Eigen::Ref<const FrameMatrix>& samples,
                             double range_floor = kDefaultRangeFloor);

  int dims() const { return static_cast<int>(min_.size()); }
  bool fitted() const { return min_.size() > 0; }
  const Eigen::VectorXd& min() const { return min_; }
  const Eigen::VectorXd& max() const { return max_; }
  double range_floor() const { return range_floor_; }

  // Applies row-wise to a matrix whose columns are the normalized dims.
  FrameMatrix NormalizeRows(const Eigen::Ref<const FrameMatrix>& rows) const;
  FrameMatrix DenormalizeRows(const Eigen::Ref<const FrameMatrix>& rows) const;
  Eigen::VectorXd Normalize(const Eigen::VectorXd& v) const;
  Eigen::VectorXd Denormalize(const Eigen::VectorXd& v) const;

 private:
  double Scale(int d) const;

  Eigen::VectorXd min_;
  Eigen::VectorXd max_;
  double range_floor_ = kDefaultRangeFloor;
};

// Per-joint min/max over every frame of every training plan.
using PlanNormalizer = RangeNormalizer;

PlanNormalizer FitPlanNormalizer(const LabeledDemoSet& demos,
                                 double range_floor =
                                     RangeNormalizer::kDefaultRangeFloor);
ActionPlan NormalizePlan(const ActionPlan& plan, const PlanNormalizer& norm);
ActionPlan DenormalizePlan(const ActionPlan& plan, const PlanNormalizer& norm);

// JSON ----------------------------------------------------------------------

nlohmann::json PlanToJson(const ActionPlan& plan);
ActionPlan PlanFromJson(const nlohmann::json& j, double dt);

nlohmann::json DemoSetToJson(const LabeledDemoSet& demos);
LabeledDemoSet DemoSetFromJson(const nlohmann::json& j);

nlohmann::json VectorToJson(const Eigen::VectorXd& v);
Eigen::VectorXd VectorFromJson(const nlohmann::json& j);

}  // namespace adap

#endif  // ADAP_DOMAIN_HPP_
