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

#include "adap/adapter.hpp"

#include <algorithm>

namespace adap {

AdapterState AdapterState::FromDemos(const LabeledDemoSet& demos,
                                     const AdapterConfig& cfg) {
  std::vector<AdapterPair> pairs;
  pairs.reserve(demos.size());
  for (const DemoEntry& e : demos.entries) pairs.push_back({e.result, e.result});
  return FromPairs(std::move(pairs), cfg);
}

AdapterState AdapterState::FromPairs(std::vector<AdapterPair> initial,
                                     const AdapterConfig& cfg) {
  if (initial.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "adapter needs initial pairs");
  }
  AdapterState state;
  state.cfg_ = cfg;
  state.initial_ = std::move(initial);
  state.residual_mean_.setZero();
  state.lower_ = state.initial_.front().condition;
  state.upper_ = state.lower_;
  for (const AdapterPair& p : state.initial_) {
    if (!p.condition.allFinite() || !p.perceived_goal.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "adapter pair is not finite");
    }
    state.residual_mean_ += p.condition - p.perceived_goal;
    state.lower_ = state.lower_.cwiseMin(p.condition);
    state.upper_ = state.upper_.cwiseMax(p.condition);
  }
  state.residual_mean_ /= static_cast<double>(state.initial_.size());
  state.lower_.array() -= cfg.condition_margin;
  state.upper_.array() += cfg.condition_margin;
  state.Refit();
  return state;
}

void AdapterState::Refit() {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd x(n, kResultDim);
  Eigen::MatrixXd y(n, kResultDim);
  Eigen::Index row = 0;
  auto add = [&](const AdapterPair& p) {
    x.row(row) = p.perceived_goal.transpose();
    y.row(row) = (p.condition - p.perceived_goal - residual_mean_).transpose();
    ++row;
  };
  for (const AdapterPair& p : initial_) add(p);
  for (const AdapterPair& p : tail_) add(p);
  model_ = GprModel::Fit(x, y, cfg_.gpr);
}

ConditionVector AdapterState::Propose(const GoalVector& perceived_goal) const {
  if (!initialized()) {
    throw Error(ErrorCode::kUninitialized, "adapter has no data");
  }
  const GprModel::Prediction p = model_.Predict(perceived_goal);
  ConditionVector c = perceived_goal + residual_mean_ + p.mean;
  return c.cwiseMax(lower_).cwiseMin(upper_);
}

void AdapterState::Update(const ConditionVector& condition,
                          const GoalVector& observed_goal) {
  if (!initialized()) {
    throw Error(ErrorCode::kUninitialized, "adapter has no data");
  }
  if (!condition.allFinite() || !observed_goal.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "adapter update is not finite");
  }
  tail_.push_back({condition, observed_goal});
  if (cfg_.tail_cap >= 0) {
    while (tail_.size() > static_cast<std::size_t>(cfg_.tail_cap)) {
      tail_.pop_front();
    }
  }
  Refit();
}

nlohmann::json AdapterState::ToJson() const {
  auto pair_json = [](const AdapterPair& p) {
    return nlohmann::json{
        {"condition", {p.condition.x(), p.condition.y()}},
        {"perceived_goal", {p.perceived_goal.x(), p.perceived_goal.y()}}};
  };
  nlohmann::json j;
  j["initial"] = nlohmann::json::array();
  for (const AdapterPair& p : initial_) j["initial"].push_back(pair_json(p));
  j["tail"] = nlohmann::json::array();
  for (const AdapterPair& p : tail_) j["tail"].push_back(pair_json(p));
  j["tail_cap"] = cfg_.tail_cap;
  if (model_.fitted()) {
    j["length_scales"] = {model_.length_scale(0), model_.length_scale(1)};
  }
  return j;
}

}  // namespace adap
