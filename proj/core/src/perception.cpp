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

#include "adap/perception.hpp"

#include <cmath>

namespace adap {

PerceptionGrid::PerceptionGrid(std::vector<double> fine_steps,
                               double coarse_step)
    : fine_(std::move(fine_steps)), coarse_(coarse_step) {
  if (fine_.empty() || fine_.front() != 0.0 || !(coarse_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid must start at 0 and have a positive coarse step");
  }
  for (std::size_t i = 1; i < fine_.size(); ++i) {
    if (!(fine_[i] > fine_[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid magnitudes must be strictly increasing");
    }
  }
  if (!(fine_.back() < coarse_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "fine steps must lie below the coarse step");
  }
}

std::pair<double, double> PerceptionGrid::Bracket(double magnitude) const {
  for (std::size_t i = 0; i + 1 < fine_.size(); ++i) {
    if (magnitude <= fine_[i + 1]) return {fine_[i], fine_[i + 1]};
  }
  if (magnitude <= coarse_) return {fine_.back(), coarse_};
  // Multiples n * coarse, computed by multiplication so outputs are exactly
  // reproducible grid values.
  const double n = std::floor(magnitude / coarse_);
  double lo = n * coarse_;
  double hi = (n + 1.0) * coarse_;
  if (lo > magnitude) {
    hi = lo;
    lo = (n - 1.0) * coarse_;
  } else if (hi < magnitude) {
    lo = hi;
    hi = (n + 2.0) * coarse_;
  }
  return {lo, hi};
}

double PerceptionGrid::Snap(double value) const {
  const double magnitude = std::abs(value);
  const auto [lo, hi] = Bracket(magnitude);
  const double snapped = (magnitude - lo <= hi - magnitude) ? lo : hi;
  if (snapped == 0.0) return 0.0;
  return value < 0.0 ? -snapped : snapped;
}

bool PerceptionGrid::Contains(double value) const {
  const double magnitude = std::abs(value);
  // Grid values are products like 7 * 0.05, so compare up to a few ulps.
  const double tol = 1e-12;
  for (double f : fine_) {
    if (std::abs(magnitude - f) <= tol) return true;
  }
  const double n = std::round(magnitude / coarse_);
  return n >= 1.0 && std::abs(magnitude - n * coarse_) <= tol;
}

Perceptron Perceptron::Stochastic(std::uint64_t seed, double spread,
                                  PerceptionGrid grid) {
  Perceptron p(std::move(grid));
  p.spread_ = spread;
  p.rng_.emplace(seed);
  return p;
}

ErrorVector Perceptron::Perceive(const ErrorVector& e) {
  ErrorVector scaled = e;
  if (rng_) {
    std::uniform_real_distribution<double> factor(1.0 - spread_,
                                                  1.0 + spread_);
    for (int d = 0; d < kResultDim; ++d) scaled[d] *= factor(*rng_);
  }
  return adap::Perceive(scaled, grid_);
}

ErrorVector Perceive(const ErrorVector& e, const PerceptionGrid& grid) {
  return {grid.Snap(e.x()), grid.Snap(e.y())};
}

}  // namespace adap
