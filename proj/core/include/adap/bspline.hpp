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

#ifndef ADAP_BSPLINE_HPP_
#define ADAP_BSPLINE_HPP_

#include <Eigen/Core>

#include "adap/domain.hpp"

namespace adap {

// Clamped uniform B-spline of the given degree over u in [0, 1]; one row of
// `control` per control point, one column per joint.
Eigen::VectorXd EvaluateBSpline(const Eigen::Ref<const FrameMatrix>& control,
                                double u, int degree = 3);

// Samples a spline into an H-frame plan: the spline spans frames
// [start_frame, end_frame]; outside that window the plan holds the first /
// last control point.
ActionPlan SampleSplinePlan(const Eigen::Ref<const FrameMatrix>& control,
                            int horizon, int start_frame, int end_frame,
                            double dt, int degree = 3);

}  // namespace adap

#endif  // ADAP_BSPLINE_HPP_
