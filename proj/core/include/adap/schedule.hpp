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

#ifndef ADAP_SCHEDULE_HPP_
#define ADAP_SCHEDULE_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace adap {

enum class BetaSchedule { kSquaredCosineCapV2, kLinear };

BetaSchedule ParseBetaSchedule(std::string_view name);
std::string_view ToString(BetaSchedule kind);

// DDPM noise schedule. Public indices are diffusion timesteps t in [1, T].
class NoiseSchedule {
 public:
  static constexpr double kMaxBeta = 0.999;

  NoiseSchedule() = default;
  static NoiseSchedule Make(int timesteps,
                            BetaSchedule kind = BetaSchedule::kSquaredCosineCapV2,
                            double beta_start = 1e-4, double beta_end = 0.02);

  int timesteps() const { return static_cast<int>(beta_.size()); }
  BetaSchedule kind() const { return kind_; }

  double beta(int t) const { return beta_[t - 1]; }
  double alpha(int t) const { return 1.0 - beta_[t - 1]; }
  double alpha_bar(int t) const { return alpha_bar_[t - 1]; }
  // alpha_bar at t - 1, with the convention alpha_bar(0) = 1.
  double alpha_bar_prev(int t) const {
    return t <= 1 ? 1.0 : alpha_bar_[t - 2];
  }
  // Fixed-small posterior variance beta_t (1 - abar_{t-1}) / (1 - abar_t).
  double posterior_variance(int t) const;

  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& alpha_bars() const { return alpha_bar_; }

 private:
  BetaSchedule kind_ = BetaSchedule::kSquaredCosineCapV2;
  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
};

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) noise.
Eigen::VectorXd QSample(const NoiseSchedule& schedule,
                        const Eigen::Ref<const Eigen::VectorXd>& x0, int t,
                        const Eigen::Ref<const Eigen::VectorXd>& noise);

}  // namespace adap

#endif  // ADAP_SCHEDULE_HPP_
