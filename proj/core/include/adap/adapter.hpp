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

#ifndef ADAP_ADAPTER_HPP_
#define ADAP_ADAPTER_HPP_

#include <deque>
#include <vector>

#include <json.hpp>

#include "adap/domain.hpp"
#include "adap/gpr.hpp"

namespace adap {

struct AdapterConfig {
  GprConfig gpr;
  // Stage-2 memory; a negative value keeps every trial.
  int tail_cap = 2;
  // Proposals are clamped to the D_e result box grown by this margin (m).
  double condition_margin = 0.20;
};

struct AdapterPair {
  ConditionVector condition = ConditionVector::Zero();
  GoalVector perceived_goal = GoalVector::Zero();
};

// The condition adapter M: perceived goal -> generation condition.
//
// Holds D_M as an always-kept initial segment plus a bounded stage-2 tail.
// The per-dimension GPRs regress the residual c - g~ (centered by the
// initial-segment mean), so far from data the proposal falls back toward
// the identity map.
class AdapterState {
 public:
  AdapterState() = default;

  // D_M initialized with identity pairs c_i = g~_i = r~_i.
  static AdapterState FromDemos(const LabeledDemoSet& demos,
                                const AdapterConfig& cfg = {});
  static AdapterState FromPairs(std::vector<AdapterPair> initial,
                                const AdapterConfig& cfg = {});

  ConditionVector Propose(const GoalVector& perceived_goal) const;

  // Appends (c, g~ + e~), evicting the oldest stage-2 pair beyond tail_cap.
  void Update(const ConditionVector& condition,
              const GoalVector& observed_goal);

  bool initialized() const { return model_.fitted(); }
  std::size_t size() const { return initial_.size() + tail_.size(); }
  std::size_t initial_size() const { return initial_.size(); }
  const std::vector<AdapterPair>& initial() const { return initial_; }
  const std::deque<AdapterPair>& tail() const { return tail_; }
  const GprModel& model() const { return model_; }
  const AdapterConfig& config() const { return cfg_; }
  const PlaneVector& lower_bound() const { return lower_; }
  const PlaneVector& upper_bound() const { return upper_; }

  nlohmann::json ToJson() const;

 private:
  void Refit();

  AdapterConfig cfg_;
  std::vector<AdapterPair> initial_;
  std::deque<AdapterPair> tail_;
  PlaneVector residual_mean_ = PlaneVector::Zero();
  PlaneVector lower_ = PlaneVector::Zero();
  PlaneVector upper_ = PlaneVector::Zero();
  GprModel model_;
};

}  // namespace adap

#endif  // ADAP_ADAPTER_HPP_
