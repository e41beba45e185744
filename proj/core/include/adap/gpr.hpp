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

#ifndef ADAP_GPR_HPP_
#define ADAP_GPR_HPP_

#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace adap {

struct GprConfig {
  double amplitude = 1.0;        // constant kernel, held fixed
  double length_scale = 1.0;     // initial RBF length scale
  double length_scale_min = 0.05;
  double length_scale_max = 5.0;
  double noise = 1e-6;           // alpha added to the kernel diagonal
  double max_noise = 1e-2;       // jitter escalation ceiling
  int restarts = 5;
  bool optimize = true;
};

// One zero-mean GP per output column, each with its own RBF length scale
// chosen by maximizing the log marginal likelihood.
class GprModel {
 public:
  struct Prediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
  };

  GprModel() = default;

  // X: n x d inputs, Y: n x m targets. Throws kSingularKernel when K + aI
  // cannot be factored even at max_noise, kInvalidArgument on bad shapes.
  static GprModel Fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const GprConfig& cfg = {});

  Prediction Predict(const Eigen::VectorXd& query) const;

  bool fitted() const { return !outputs_.empty(); }
  int size() const { return static_cast<int>(x_.rows()); }
  int outputs() const { return static_cast<int>(outputs_.size()); }
  double length_scale(int output) const { return outputs_[output].length_scale; }
  double noise(int output) const { return outputs_[output].noise; }
  double log_marginal_likelihood(int output) const {
    return outputs_[output].lml;
  }
  const GprConfig& config() const { return cfg_; }

  // k(a, b) = amplitude * exp(-|a - b|^2 / (2 l^2))
  static double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       double amplitude, double length_scale);

  // Log marginal likelihood of targets y at a given length scale, or -inf
  // when the kernel cannot be factored.
  static double LogMarginalLikelihood(const Eigen::MatrixXd& x,
                                      const Eigen::VectorXd& y,
                                      double length_scale,
                                      const GprConfig& cfg);

 private:
  struct Output {
    double length_scale = 1.0;
    double noise = 1e-6;
    double lml = 0.0;
    Eigen::LLT<Eigen::MatrixXd> chol;
    Eigen::VectorXd weights;  // (K + aI)^-1 y
  };

  Eigen::MatrixXd x_;
  std::vector<Output> outputs_;
  GprConfig cfg_;
};

}  // namespace adap

#endif  // ADAP_GPR_HPP_
