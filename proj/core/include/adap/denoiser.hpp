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

#ifndef ADAP_DENOISER_HPP_
#define ADAP_DENOISER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace adap {

struct DenoiserShape {
  int plan_dim = 140 * 4;   // flattened H * J
  int cond_dim = 2;
  int time_embed_dim = 32;
  int cond_embed_dim = 32;
  int hidden = 512;

  int input_dim() const { return plan_dim + time_embed_dim + cond_embed_dim; }
  bool operator==(const DenoiserShape&) const = default;
};

// Sinusoidal embedding of integer diffusion timesteps, one column per entry.
Eigen::MatrixXd TimestepEmbedding(const std::vector<int>& t, int dim);

// Epsilon predictor: two SiLU hidden layers over
// [x_t ; sinusoid(t) ; E_c c + e_c], output of plan_dim.
//
// With a clean-plan skip installed (SetCleanSkip), the network output F is
// read as a clean-plan estimate and the prediction becomes
//   eps = (x_t - sqrt(abar_t) F) / sqrt(1 - abar_t).
// Without it the network output is the prediction itself.
//
// All parameters live in one flat vector, laid out as
//   W1 (hidden x input), b1, W2 (hidden x hidden), b2,
//   W3 (plan x hidden), b3, Ec (cond_embed x cond), ec
// with matrices column-major. Checkpoints serialize this vector verbatim.
class Denoiser {
 public:
  // Batch-major activations: one column per sample.
  using Batch = Eigen::MatrixXd;

  Denoiser() = default;
  explicit Denoiser(const DenoiserShape& shape);

  static std::size_t ParameterCount(const DenoiserShape& shape);

  // PyTorch-style U(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization.
  void Initialize(std::uint64_t seed);

  const DenoiserShape& shape() const { return shape_; }

  // alpha_bar[t - 1] for t = 1..T; an empty vector removes the skip.
  void SetCleanSkip(std::vector<double> alpha_bar);
  bool has_clean_skip() const { return !alpha_bar_.empty(); }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  // x: plan_dim x B, cond: cond_dim x B.
  Batch Forward(const Batch& x, const std::vector<int>& t,
                const Batch& cond) const;

  // Same as Forward with an explicit parameter vector (e.g. EMA weights).
  Batch Forward(const Eigen::VectorXd& params, const Batch& x,
                const std::vector<int>& t, const Batch& cond) const;

  // Mean squared error against `target` over all entries; gradient w.r.t.
  // the flat parameter vector is written to `grad` (resized as needed).
  double LossAndGradient(const Batch& x, const std::vector<int>& t,
                         const Batch& cond, const Batch& target,
                         Eigen::VectorXd* grad) const;

 private:
  struct Offsets {
    std::size_t w1, b1, w2, b2, w3, b3, wc, bc, total;
  };
  static Offsets Layout(const DenoiserShape& shape);

  // Assembles the first-layer input (input_dim x B).
  Batch BuildInput(const Eigen::VectorXd& params, const Batch& x,
                   const std::vector<int>& t, const Batch& cond) const;
  // Per-column (1 / sqrt(1 - abar), sqrt(abar) / sqrt(1 - abar)).
  void SkipCoefficients(const std::vector<int>& t, Eigen::VectorXd* gain_x,
                        Eigen::VectorXd* gain_f) const;

  DenoiserShape shape_;
  Offsets offsets_{};
  Eigen::VectorXd params_;
  std::vector<double> alpha_bar_;
};

}  // namespace adap

#endif  // ADAP_DENOISER_HPP_
