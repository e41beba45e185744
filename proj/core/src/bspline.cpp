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

#include "adap/bspline.hpp"

#include <algorithm>
#include <vector>

namespace adap {

namespace {

std::vector<double> ClampedKnots(int count, int degree) {
  const int spans = count - degree;
  std::vector<double> knots(count + degree + 1);
  for (int i = 0; i < static_cast<int>(knots.size()); ++i) {
    if (i <= degree) {
      knots[i] = 0.0;
    } else if (i >= count) {
      knots[i] = 1.0;
    } else {
      knots[i] = static_cast<double>(i - degree) / spans;
    }
  }
  return knots;
}

}  // namespace

Eigen::VectorXd EvaluateBSpline(const Eigen::Ref<const FrameMatrix>& control,
                                double u, int degree) {
  const int count = static_cast<int>(control.rows());
  if (count <= degree) {
    throw Error(ErrorCode::kInvalidArgument,
                "need more control points than the spline degree");
  }
  u = std::clamp(u, 0.0, 1.0);
  const std::vector<double> knots = ClampedKnots(count, degree);
  // Span index k with knots[k] <= u < knots[k + 1].
  int k = degree;
  while (k < count - 1 && u >= knots[k + 1]) ++k;

  // de Boor
  std::vector<Eigen::VectorXd> d;
  d.reserve(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    d.push_back(control.row(j + k - degree).transpose());
  }
  for (int r = 1; r <= degree; ++r) {
    for (int j = degree; j >= r; --j) {
      const int i = j + k - degree;
      const double denom = knots[i + degree - r + 1] - knots[i];
      const double alpha = denom > 0.0 ? (u - knots[i]) / denom : 0.0;
      d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
    }
  }
  return d[degree];
}

ActionPlan SampleSplinePlan(const Eigen::Ref<const FrameMatrix>& control,
                            int horizon, int start_frame, int end_frame,
                            double dt, int degree) {
  if (end_frame <= start_frame) {
    throw Error(ErrorCode::kInvalidArgument, "empty spline window");
  }
  ActionPlan plan{FrameMatrix(horizon, control.cols()), dt};
  const double span = static_cast<double>(end_frame - start_frame);
  for (int t = 0; t < horizon; ++t) {
    const double u = std::clamp((t - start_frame) / span, 0.0, 1.0);
    plan.frames.row(t) = EvaluateBSpline(control, u, degree).transpose();
  }
  return plan;
}

}  // namespace adap
