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

#include "adap/gpr.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "adap/error.hpp"

namespace adap {

namespace {

Eigen::MatrixXd KernelMatrix(const Eigen::MatrixXd& x, double amplitude,
                             double length_scale) {
  const auto n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d2 = (x.row(i) - x.row(j)).squaredNorm();
      k(i, j) = k(j, i) =
          amplitude * std::exp(-0.5 * d2 / (length_scale * length_scale));
    }
  }
  return k;
}

// Factors K + a I, escalating a by 10x up to max_noise.
std::optional<std::pair<Eigen::LLT<Eigen::MatrixXd>, double>> Factor(
    const Eigen::MatrixXd& k, const GprConfig& cfg) {
  for (double noise = cfg.noise; noise <= cfg.max_noise * (1.0 + 1e-9);
       noise *= 10.0) {
    Eigen::MatrixXd m = k;
    m.diagonal().array() += noise;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success &&
        (llt.matrixLLT().diagonal().array() > 0.0).all()) {
      return std::make_pair(std::move(llt), noise);
    }
  }
  return std::nullopt;
}

double Lml(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& y) {
  const Eigen::VectorXd w = llt.solve(y);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * y.dot(w) - 0.5 * log_det -
         0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

}  // namespace

double GprModel::Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        double amplitude, double length_scale) {
  return amplitude *
         std::exp(-0.5 * (a - b).squaredNorm() / (length_scale * length_scale));
}

double GprModel::LogMarginalLikelihood(const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& y,
                                       double length_scale,
                                       const GprConfig& cfg) {
  const auto factor = Factor(KernelMatrix(x, cfg.amplitude, length_scale), cfg);
  if (!factor) return -std::numeric_limits<double>::infinity();
  return Lml(factor->first, y);
}

GprModel GprModel::Fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const GprConfig& cfg) {
  if (x.rows() < 1 || y.rows() != x.rows() || y.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "GPR needs n >= 1 matching rows");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "GPR training data must be finite");
  }
  GprModel model;
  model.x_ = x;
  model.cfg_ = cfg;

  for (Eigen::Index col = 0; col < y.cols(); ++col) {
    const Eigen::VectorXd target = y.col(col);
    double best_ls = cfg.length_scale;
    if (cfg.optimize) {
      auto objective = [&](double log_ls) {
        return LogMarginalLikelihood(x, target, std::exp(log_ls), cfg);
      };
      double best = objective(std::log(cfg.length_scale));
      const double lo = std::log(cfg.length_scale_min);
      const double hi = std::log(cfg.length_scale_max);
      const int restarts = std::max(1, cfg.restarts);
      const double width = (hi - lo) / restarts;
      const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
      // One golden-section search per bracket; brackets tile the bounds.
      for (int r = 0; r < restarts; ++r) {
        double a = lo + r * width;
        double b = a + width;
        double c = b - ratio * (b - a);
        double d = a + ratio * (b - a);
        double fc = objective(c);
        double fd = objective(d);
        for (int it = 0; it < 40; ++it) {
          if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
          }
        }
        for (double cand : {a, b, 0.5 * (a + b)}) {
          const double f = objective(cand);
          if (f > best) {
            best = f;
            best_ls = std::exp(cand);
          }
        }
      }
    }
    auto factor = Factor(KernelMatrix(x, cfg.amplitude, best_ls), cfg);
    if (!factor) {
      throw Error(ErrorCode::kSingularKernel,
                  "kernel not positive definite up to noise " +
                      std::to_string(cfg.max_noise));
    }
    Output out;
    out.length_scale = best_ls;
    out.noise = factor->second;
    out.chol = std::move(factor->first);
    out.weights = out.chol.solve(target);
    out.lml = Lml(out.chol, target);
    model.outputs_.push_back(std::move(out));
  }
  return model;
}

GprModel::Prediction GprModel::Predict(const Eigen::VectorXd& query) const {
  if (!fitted()) {
    throw Error(ErrorCode::kUninitialized, "GPR model not fitted");
  }
  Prediction p;
  p.mean.resize(outputs());
  p.std.resize(outputs());
  const Eigen::Index n = x_.rows();
  for (int o = 0; o < outputs(); ++o) {
    const Output& out = outputs_[o];
    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      k_star[i] = Kernel(x_.row(i).transpose(), query, cfg_.amplitude,
                         out.length_scale);
    }
    p.mean[o] = k_star.dot(out.weights);
    const Eigen::VectorXd v = out.chol.matrixL().solve(k_star);
    p.std[o] = std::sqrt(std::max(0.0, cfg_.amplitude - v.squaredNorm()));
  }
  return p;
}

}  // namespace adap
