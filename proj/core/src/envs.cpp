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

#include "adap/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace adap {

JointLimits ArmModel::DefaultLimits() {
  JointLimits limits;
  limits.lower.resize(kJoints);
  limits.upper.resize(kJoints);
  limits.lower << -std::numbers::pi, -0.3, -2.8, -2.8;
  limits.upper << std::numbers::pi, std::numbers::pi, 2.8, 2.8;
  return limits;
}

Eigen::Vector3d ForwardKinematics(const Eigen::Ref<const Eigen::VectorXd>& q,
                                  const ArmModel& arm) {
  const double phi1 = q[1];
  const double phi2 = phi1 + q[2];
  const double phi3 = phi2 + q[3];
  const double last = arm.link_lengths[2] + arm.tool_offset;
  const double radial = arm.link_lengths[0] * std::cos(phi1) +
                        arm.link_lengths[1] * std::cos(phi2) +
                        last * std::cos(phi3);
  const double height = arm.base_height + arm.link_lengths[0] * std::sin(phi1) +
                        arm.link_lengths[1] * std::sin(phi2) +
                        last * std::sin(phi3);
  return {radial * std::cos(q[0]), radial * std::sin(q[0]), height};
}

ToolPath ComputeToolPath(const ActionPlan& plan, const ArmModel& arm) {
  const int h = plan.horizon();
  ToolPath path;
  path.position.resize(h, 3);
  path.velocity.resize(h, 3);
  for (int t = 0; t < h; ++t) {
    path.position.row(t) =
        ForwardKinematics(plan.frames.row(t).transpose(), arm).transpose();
  }
  if (h == 1) {
    path.velocity.setZero();
    return path;
  }
  for (int t = 0; t < h; ++t) {
    if (t == 0) {
      path.velocity.row(t) =
          (path.position.row(1) - path.position.row(0)) / plan.dt;
    } else if (t == h - 1) {
      path.velocity.row(t) =
          (path.position.row(h - 1) - path.position.row(h - 2)) / plan.dt;
    } else {
      path.velocity.row(t) =
          (path.position.row(t + 1) - path.position.row(t - 1)) /
          (2.0 * plan.dt);
    }
  }
  return path;
}

int PeakSpeedFrame(const ToolPath& path) {
  int best = 0;
  double best_speed = -1.0;
  for (int t = 0; t < path.velocity.rows(); ++t) {
    const double s = path.velocity.row(t).squaredNorm();
    if (s > best_speed) {
      best_speed = s;
      best = t;
    }
  }
  return best;
}

EnvModel EnvModel::Projectile() { return {ArmModel{}, ProjectileParams{}}; }

EnvModel EnvModel::Sliding(double mu) {
  SlidingParams p;
  p.mu = mu;
  return {ArmModel{}, p};
}

EnvModel EnvModel::Pendulum(double string_length) {
  PendulumParams p;
  p.string_length = string_length;
  return {ArmModel{}, p};
}

EnvModel EnvModel::Perturbed(double scale, std::uint64_t seed) const {
  EnvModel out = *this;
  if (scale == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(1.0 - scale, 1.0 + scale);
  for (int i = 0; i < 3; ++i) out.arm.link_lengths[i] *= factor(rng);
  out.arm.tool_offset *= factor(rng);
  const double task_factor = factor(rng);
  std::visit(
      [task_factor](auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SlidingParams>) {
          d.mu *= task_factor;
        } else if constexpr (std::is_same_v<T, PendulumParams>) {
          d.string_length *= task_factor;
        }
      },
      out.dynamics);
  return out;
}

std::string_view TaskName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kProjectile: return "basketball";
    case TaskKind::kSliding: return "curling";
    case TaskKind::kPendulum: return "fishing";
  }
  return "unknown";
}

ResultVector BallisticLanding(const Eigen::Vector3d& p0,
                              const Eigen::Vector3d& v0, double gravity,
                              double z_table) {
  const double drop = p0.z() - z_table;
  const double disc = v0.z() * v0.z() + 2.0 * gravity * drop;
  if (drop < 0.0 || disc < 0.0) {
    std::ostringstream os;
    os << "release height " << p0.z() << " below table " << z_table;
    throw Error(ErrorCode::kNoImpact, os.str());
  }
  const double t_hit = (v0.z() + std::sqrt(disc)) / gravity;
  return {p0.x() + v0.x() * t_hit, p0.y() + v0.y() * t_hit};
}

ResultVector SlidingStop(const PlaneVector& p0, const PlaneVector& v0,
                         double mu, double gravity) {
  const double speed = v0.norm();
  if (speed == 0.0) return p0;
  const double distance = speed * speed / (2.0 * mu * gravity);
  return p0 + (v0 / speed) * distance;
}

namespace {

struct TipState {
  Eigen::Vector3d p;
  Eigen::Vector3d v;
  Eigen::Vector3d a;
};

// Cubic Hermite through frame positions with finite-difference tangents.
TipState InterpolateTip(const ToolPath& tip, int frame, double s, double h) {
  const int last = static_cast<int>(tip.position.rows()) - 1;
  if (frame >= last) {
    return {tip.position.row(last).transpose(),
            tip.velocity.row(last).transpose(), Eigen::Vector3d::Zero()};
  }
  const Eigen::Vector3d p0 = tip.position.row(frame).transpose();
  const Eigen::Vector3d p1 = tip.position.row(frame + 1).transpose();
  const Eigen::Vector3d m0 = tip.velocity.row(frame).transpose() * h;
  const Eigen::Vector3d m1 = tip.velocity.row(frame + 1).transpose() * h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  TipState out;
  out.p = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 +
          (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
  out.v = ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 +
           (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1) /
          h;
  out.a = ((12 * s - 6) * p0 + (6 * s - 4) * m0 + (-12 * s + 6) * p1 +
           (6 * s - 2) * m1) /
          (h * h);
  return out;
}

}  // namespace

ResultVector PendulumRollout(const ToolPath& tip, double frame_dt,
                             const PendulumParams& params,
                             PendulumTrace* trace) {
  const Eigen::Vector3d g(0.0, 0.0, -params.gravity);
  const double len = params.string_length;
  const int frames = static_cast<int>(tip.position.rows());
  const int substeps =
      std::max(1, static_cast<int>(std::lround(frame_dt / params.substep)));
  const double dt = frame_dt / substeps;

  // Hanging at rest relative to the tip at frame 0.
  TipState start = InterpolateTip(tip, 0, 0.0, frame_dt);
  Eigen::Vector3d x = start.p + Eigen::Vector3d(0.0, 0.0, -len);
  Eigen::Vector3d v = start.v;

  int step_index = 0;
  for (int f = 0; f + 1 < frames; ++f) {
    for (int s = 0; s < substeps; ++s, ++step_index) {
      const TipState now =
          InterpolateTip(tip, f, static_cast<double>(s) / substeps, frame_dt);
      const TipState next = InterpolateTip(
          tip, f, static_cast<double>(s + 1) / substeps, frame_dt);

      Eigen::Vector3d rel = x - now.p;
      const Eigen::Vector3d u = rel.normalized();
      Eigen::Vector3d w = v - now.v;
      const Eigen::Vector3d w_tan = w - w.dot(u) * u;
      const double tension_per_mass =
          g.dot(u) - now.a.dot(u) + w_tan.squaredNorm() / len;

      if (trace != nullptr) {
        trace->tension.push_back(params.mass * tension_per_mass);
        trace->energy.push_back(params.mass *
                                (0.5 * v.squaredNorm() + params.gravity * x.z()));
      }
      if (x.z() <= params.z_table) return x.head<2>();
      if (tension_per_mass <= 0.0) {
        if (trace != nullptr) {
          trace->went_slack = true;
          trace->slack_substep = step_index;
        }
        return BallisticLanding(x, v, params.gravity, params.z_table);
      }

      // Semi-implicit Euler, then project back onto the string sphere.
      const Eigen::Vector3d accel = g - tension_per_mass * u;
      Eigen::Vector3d v_new = v + accel * dt;
      Eigen::Vector3d x_new = x + v_new * dt;
      const Eigen::Vector3d u_new = (x_new - next.p).normalized();
      x_new = next.p + len * u_new;
      Eigen::Vector3d w_new = v_new - next.v;
      w_new -= w_new.dot(u_new) * u_new;

      // Within one substep the tip frame sees a uniform field g - a_tip, in
      // which relative energy is conserved; strip any gain the projection
      // introduced.
      const Eigen::Vector3d g_eff = g - now.a;
      const double e_old = 0.5 * w.squaredNorm() - g_eff.dot(rel);
      const Eigen::Vector3d rel_new = x_new - next.p;
      const double potential_new = -g_eff.dot(rel_new);
      const double kinetic_new = 0.5 * w_new.squaredNorm();
      if (kinetic_new + potential_new > e_old && kinetic_new > 0.0) {
        const double allowed = std::max(0.0, e_old - potential_new);
        w_new *= std::sqrt(allowed / kinetic_new);
      }
      x = x_new;
      v = next.v + w_new;
    }
  }
  const Eigen::Vector3d final_tip = tip.position.row(frames - 1).transpose();
  return final_tip.head<2>();
}

ResultVector Rollout(const EnvModel& env, const ActionPlan& plan) {
  const PlanShape shape{plan.horizon(), ArmModel::kJoints, plan.dt};
  ValidatePlan(plan, shape, env.arm.limits);
  const ToolPath path = ComputeToolPath(plan, env.arm);

  return std::visit(
      [&](const auto& dyn) -> ResultVector {
        using T = std::decay_t<decltype(dyn)>;
        if constexpr (std::is_same_v<T, SlidingParams>) {
          int best = 0;
          double best_speed = -1.0;
          for (int t = 0; t < path.velocity.rows(); ++t) {
            const double s = path.velocity.row(t).head<2>().norm();
            if (s > best_speed) {
              best_speed = s;
              best = t;
            }
          }
          if (best_speed < env.min_peak_speed) {
            throw Error(ErrorCode::kDegenerateMotion,
                        "peak horizontal tool speed " +
                            std::to_string(best_speed) + " m/s");
          }
          const PlaneVector p0 = path.position.row(best).head<2>().transpose();
          const PlaneVector v0 = path.velocity.row(best).head<2>().transpose();
          return SlidingStop(p0, v0, dyn.mu, dyn.gravity);
        } else {
          const int peak = PeakSpeedFrame(path);
          const double speed = path.velocity.row(peak).norm();
          if (speed < env.min_peak_speed) {
            throw Error(ErrorCode::kDegenerateMotion,
                        "peak tool speed " + std::to_string(speed) + " m/s");
          }
          if constexpr (std::is_same_v<T, ProjectileParams>) {
            return BallisticLanding(path.position.row(peak).transpose(),
                                    path.velocity.row(peak).transpose(),
                                    dyn.gravity, dyn.z_table);
          } else {
            return PendulumRollout(path, plan.dt, dyn);
          }
        }
      },
      env.dynamics);
}

}  // namespace adap
