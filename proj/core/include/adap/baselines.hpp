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

#ifndef ADAP_BASELINES_HPP_
#define ADAP_BASELINES_HPP_

#include <array>
#include <string_view>

#include "adap/domain.hpp"
#include "adap/envs.hpp"

namespace adap {

enum class Method { kAdap, kAdapNoShift, kAdapNoForget, kInn, kInnAligned };

Method ParseMethod(std::string_view name);
std::string_view ToString(Method method);
bool UsesDiffusion(Method method);

struct InnWeights {
  std::array<int, 3> neighbors{};
  Eigen::Vector3d weights = Eigen::Vector3d::Zero();
  bool fallback = false;  // inverse-distance weights were used
};

// Affine weights over the three nearest perceived results:
// [r1 r2 r3; 1 1 1] w = [c; 1]. Falls back to inverse-distance weights when
// the neighbors are (near) collinear.
InnWeights SolveInnWeights(const ConditionVector& c,
                           const LabeledDemoSet& demos, int neighbors = 3);

// pi_INN(c): frame-wise weighted sum of the neighbor plans, clamped to the
// joint limits.
class InnPlanner {
 public:
  InnPlanner(LabeledDemoSet demos, JointLimits limits);

  ActionPlan Plan(const ConditionVector& c) const;
  const LabeledDemoSet& demos() const { return demos_; }

 private:
  LabeledDemoSet demos_;
  JointLimits limits_;
};

// Timeline-shifts every plan so its peak tool-speed frame sits at the
// (lower) median peak frame of the set. Results are carried over.
LabeledDemoSet AlignDataset(const LabeledDemoSet& demos, const ArmModel& arm);

}  // namespace adap

#endif  // ADAP_BASELINES_HPP_
