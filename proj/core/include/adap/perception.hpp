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

#ifndef ADAP_PERCEPTION_HPP_
#define ADAP_PERCEPTION_HPP_

#include <cstdint>
#include <optional>
#include <random>

#include "adap/domain.hpp"

namespace adap {

// Magnitudes a human estimate picks from: 1-4 cm, then multiples of 5 cm.
class PerceptionGrid {
 public:
  PerceptionGrid() = default;
  PerceptionGrid(std::vector<double> fine_steps, double coarse_step);

  // Signed nearest grid value; ties resolve toward zero.
  double Snap(double value) const;
  bool Contains(double value) const;

  const std::vector<double>& fine_steps() const { return fine_; }
  double coarse_step() const { return coarse_; }

 private:
  // Grid magnitudes bracketing |value| from below and above.
  std::pair<double, double> Bracket(double magnitude) const;

  std::vector<double> fine_{0.0, 0.01, 0.02, 0.03, 0.04};
  double coarse_ = 0.05;
};

// P: quantizes an error vector dimension by dimension.
class Perceptron {
 public:
  explicit Perceptron(PerceptionGrid grid = {}) : grid_(std::move(grid)) {}

  // Scales each dimension by U[1 - spread, 1 + spread] before snapping.
  static Perceptron Stochastic(std::uint64_t seed, double spread = 0.1,
                               PerceptionGrid grid = {});

  ErrorVector Perceive(const ErrorVector& e);
  ErrorVector PerceiveResult(const ResultVector& r, const GoalVector& g) {
    return Perceive(r - g);
  }

  const PerceptionGrid& grid() const { return grid_; }
  bool stochastic() const { return rng_.has_value(); }

 private:
  PerceptionGrid grid_;
  double spread_ = 0.0;
  std::optional<std::mt19937_64> rng_;
};

// Deterministic grid perception.
ErrorVector Perceive(const ErrorVector& e, const PerceptionGrid& grid = {});

}  // namespace adap

#endif  // ADAP_PERCEPTION_HPP_
