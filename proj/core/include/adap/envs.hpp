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

#ifndef ADAP_ENVS_HPP_
#define ADAP_ENVS_HPP_

#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "adap/domain.hpp"

namespace adap {

// Desk-scale 4-DoF arm: base yaw followed by three pitch joints in the
// vertical plane. Pitch angles accumulate along the chain; all-zero points
// the arm horizontally along +x.
struct ArmModel {
  static constexpr int kJoints = 4;

  Eigen::Vector3d link_lengths{0.33, 0.33, 0.20};
  double tool_offset = 0.10;
  double base_height = 0.30;
  JointLimits limits = DefaultLimits();

  static JointLimits DefaultLimits();
  double reach() const { return link_lengths.sum() + tool_offset; }
};

Eigen::Vector3d ForwardKinematics(const Eigen::Ref<const Eigen::VectorXd>& q,
                                  const ArmModel& arm);

// Tool trajectory of a plan, velocities by central differences (one-sided
// at the ends).
struct ToolPath {
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> position;
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> velocity;
};

ToolPath ComputeToolPath(const ActionPlan& plan, const ArmModel& arm);

// Index of the first frame with maximal tool speed.
int PeakSpeedFrame(const ToolPath& path);

struct ProjectileParams {
  double gravity = 9.81;
  double z_table = 0.0;
};

struct SlidingParams {
  double gravity = 9.81;
  double mu = 0.20;
};

struct PendulumParams {
  double gravity = 9.81;
  double z_table = 0.0;
  double string_length = 0.40;
  double mass = 0.05;
  double substep = 0.002;
};

enum class TaskKind { kProjectile, kSliding, kPendulum };

struct EnvModel {
  ArmModel arm;
  std::variant<ProjectileParams, SlidingParams, PendulumParams> dynamics;
  // Below this peak tool speed (m/s) a rollout has no meaningful launch.
  double min_peak_speed = 0.05;

  TaskKind kind() const {
    return static_cast<TaskKind>(dynamics.index());
  }

  static EnvModel Projectile();
  static EnvModel Sliding(double mu = 0.20);
  static EnvModel Pendulum(double string_length = 0.40);

  // Multiplies link lengths, tool offset, friction and string length by
  // independent factors drawn from U[1 - scale, 1 + scale].
  EnvModel Perturbed(double scale, std::uint64_t seed) const;
};

std::string_view TaskName(TaskKind kind);

// Landing point of a ballistic body on the plane z = z_table.
ResultVector BallisticLanding(const Eigen::Vector3d& p0,
                              const Eigen::Vector3d& v0, double gravity,
                              double z_table);

// Stop point of a body sliding with Coulomb friction.
ResultVector SlidingStop(const PlaneVector& p0, const PlaneVector& v0,
                         double mu, double gravity);

// Optional per-substep trace of the pendulum integrator, used by tests.
struct PendulumTrace {
  std::vector<double> energy;   // mechanical energy (J), taut phase only
  std::vector<double> tension;  // string tension (N)
  bool went_slack = false;
  int slack_substep = -1;
};

// Point mass on an inextensible string driven by the tip trajectory. Tip
// state between plan frames is cubic Hermite interpolated.
ResultVector PendulumRollout(const ToolPath& tip, double frame_dt,
                             const PendulumParams& params,
                             PendulumTrace* trace = nullptr);

// r = rollout(A). Throws kDegenerateMotion when the peak tool speed is below
// env.min_peak_speed, kNoImpact when a projectile releases below the table.
ResultVector Rollout(const EnvModel& env, const ActionPlan& plan);

}  // namespace adap

#endif  // ADAP_ENVS_HPP_
