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

#include "adap/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "adap/error.hpp"

namespace adap {

BetaSchedule ParseBetaSchedule(std::string_view name) {
  if (name == "squaredcos_cap_v2") return BetaSchedule::kSquaredCosineCapV2;
  if (name == "linear") return BetaSchedule::kLinear;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown beta schedule '" + std::string(name) + "'");
}

std::string_view ToString(BetaSchedule kind) {
  switch (kind) {
    case BetaSchedule::kSquaredCosineCapV2: return "squaredcos_cap_v2";
    case BetaSchedule::kLinear: return "linear";
  }
  return "unknown";
}

NoiseSchedule NoiseSchedule::Make(int timesteps, BetaSchedule kind,
                                  double beta_start, double beta_end) {
  if (timesteps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "timesteps must be >= 1");
  }
  NoiseSchedule s;
  s.kind_ = kind;
  s.beta_.resize(timesteps);
  s.alpha_bar_.resize(timesteps);
  const double n = static_cast<double>(timesteps);
  if (kind == BetaSchedule::kSquaredCosineCapV2) {
    auto f = [](double u) {
      const double c = std::cos((u + 0.008) / 1.008 * std::numbers::pi / 2.0);
      return c * c;
    };
    for (int i = 0; i < timesteps; ++i) {
      const double ratio = f((i + 1) / n) / f(i / n);
      s.beta_[i] = std::min(1.0 - ratio, kMaxBeta);
    }
  } else {
    for (int i = 0; i < timesteps; ++i) {
      s.beta_[i] = timesteps == 1
                       ? beta_start
                       : beta_start + (beta_end - beta_start) * i / (n - 1.0);
    }
  }
  double cumulative = 1.0;
  for (int i = 0; i < timesteps; ++i) {
    cumulative *= 1.0 - s.beta_[i];
    s.alpha_bar_[i] = cumulative;
  }
  return s;
}

double NoiseSchedule::posterior_variance(int t) const {
  return beta(t) * (1.0 - alpha_bar_prev(t)) / (1.0 - alpha_bar(t));
}

Eigen::VectorXd QSample(const NoiseSchedule& schedule,
                        const Eigen::Ref<const Eigen::VectorXd>& x0, int t,
                        const Eigen::Ref<const Eigen::VectorXd>& noise) {
  if (t < 1 || t > schedule.timesteps()) {
    throw Error(ErrorCode::kInvalidArgument,
                "timestep " + std::to_string(t) + " out of range");
  }
  if (x0.size() != noise.size()) {
    throw Error(ErrorCode::kInvalidArgument, "noise shape differs from x0");
  }
  const double ab = schedule.alpha_bar(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * noise;
}

}  // namespace adap
