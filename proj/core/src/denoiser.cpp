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

#include "adap/denoiser.hpp"

#include <cmath>
#include <random>

#include "adap/error.hpp"

namespace adap {

namespace {

using Matrix = Eigen::MatrixXd;
using MatMap = Eigen::Map<Matrix>;
using ConstMatMap = Eigen::Map<const Matrix>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

Matrix Sigmoid(const Matrix& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

Eigen::MatrixXd TimestepEmbedding(const std::vector<int>& t, int dim) {
  const int half = dim / 2;
  Eigen::MatrixXd out(dim, static_cast<int>(t.size()));
  const double scale = half > 1 ? std::log(10000.0) / (half - 1) : 0.0;
  for (int b = 0; b < static_cast<int>(t.size()); ++b) {
    for (int i = 0; i < half; ++i) {
      const double arg = t[b] * std::exp(-scale * i);
      out(i, b) = std::sin(arg);
      out(half + i, b) = std::cos(arg);
    }
    if (dim % 2 == 1) out(dim - 1, b) = 0.0;
  }
  return out;
}

Denoiser::Offsets Denoiser::Layout(const DenoiserShape& s) {
  Offsets o{};
  std::size_t at = 0;
  auto take = [&at](std::size_t n) {
    const std::size_t start = at;
    at += n;
    return start;
  };
  o.w1 = take(static_cast<std::size_t>(s.hidden) * s.input_dim());
  o.b1 = take(s.hidden);
  o.w2 = take(static_cast<std::size_t>(s.hidden) * s.hidden);
  o.b2 = take(s.hidden);
  o.w3 = take(static_cast<std::size_t>(s.plan_dim) * s.hidden);
  o.b3 = take(s.plan_dim);
  o.wc = take(static_cast<std::size_t>(s.cond_embed_dim) * s.cond_dim);
  o.bc = take(s.cond_embed_dim);
  o.total = at;
  return o;
}

std::size_t Denoiser::ParameterCount(const DenoiserShape& shape) {
  return Layout(shape).total;
}

Denoiser::Denoiser(const DenoiserShape& shape)
    : shape_(shape),
      offsets_(Layout(shape)),
      params_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(offsets_.total))) {
  if (shape.plan_dim <= 0 || shape.hidden <= 0 || shape.cond_dim <= 0 ||
      shape.time_embed_dim < 2 || shape.cond_embed_dim <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid denoiser shape");
  }
}

void Denoiser::Initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto fill = [&](std::size_t offset, std::size_t count, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < count; ++i) params_[offset + i] = dist(rng);
  };
  const DenoiserShape& s = shape_;
  fill(offsets_.w1, offsets_.b1 - offsets_.w1, s.input_dim());
  fill(offsets_.b1, s.hidden, s.input_dim());
  fill(offsets_.w2, offsets_.b2 - offsets_.w2, s.hidden);
  fill(offsets_.b2, s.hidden, s.hidden);
  fill(offsets_.w3, offsets_.b3 - offsets_.w3, s.hidden);
  fill(offsets_.b3, s.plan_dim, s.hidden);
  fill(offsets_.wc, offsets_.bc - offsets_.wc, s.cond_dim);
  fill(offsets_.bc, s.cond_embed_dim, s.cond_dim);
}

void Denoiser::SetCleanSkip(std::vector<double> alpha_bar) {
  for (double a : alpha_bar) {
    if (!(a > 0.0 && a < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "alpha_bar must lie in (0, 1)");
    }
  }
  alpha_bar_ = std::move(alpha_bar);
}

void Denoiser::SkipCoefficients(const std::vector<int>& t,
                                Eigen::VectorXd* gain_x,
                                Eigen::VectorXd* gain_f) const {
  const auto batch = static_cast<Eigen::Index>(t.size());
  gain_x->resize(batch);
  gain_f->resize(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    if (t[b] < 1 || t[b] > static_cast<int>(alpha_bar_.size())) {
      throw Error(ErrorCode::kInvalidArgument, "timestep out of range");
    }
    const double ab = alpha_bar_[t[b] - 1];
    const double inv_n = 1.0 / std::sqrt(1.0 - ab);
    (*gain_x)[b] = inv_n;
    (*gain_f)[b] = std::sqrt(ab) * inv_n;
  }
}

Denoiser::Batch Denoiser::BuildInput(const Eigen::VectorXd& p, const Batch& x,
                                     const std::vector<int>& t,
                                     const Batch& cond) const {
  const DenoiserShape& s = shape_;
  const auto batch = x.cols();
  if (x.rows() != s.plan_dim || cond.rows() != s.cond_dim ||
      cond.cols() != batch || static_cast<Eigen::Index>(t.size()) != batch) {
    throw Error(ErrorCode::kInvalidArgument, "denoiser input shape mismatch");
  }
  ConstMatMap wc(p.data() + offsets_.wc, s.cond_embed_dim, s.cond_dim);
  ConstVecMap bc(p.data() + offsets_.bc, s.cond_embed_dim);
  Batch z(s.input_dim(), batch);
  z.topRows(s.plan_dim) = x;
  z.middleRows(s.plan_dim, s.time_embed_dim) =
      TimestepEmbedding(t, s.time_embed_dim);
  z.bottomRows(s.cond_embed_dim).noalias() = wc * cond;
  z.bottomRows(s.cond_embed_dim).colwise() += bc;
  return z;
}

Denoiser::Batch Denoiser::Forward(const Batch& x, const std::vector<int>& t,
                                  const Batch& cond) const {
  return Forward(params_, x, t, cond);
}

Denoiser::Batch Denoiser::Forward(const Eigen::VectorXd& p, const Batch& x,
                                  const std::vector<int>& t,
                                  const Batch& cond) const {
  const DenoiserShape& s = shape_;
  const Batch z = BuildInput(p, x, t, cond);
  ConstMatMap w1(p.data() + offsets_.w1, s.hidden, s.input_dim());
  ConstVecMap b1(p.data() + offsets_.b1, s.hidden);
  ConstMatMap w2(p.data() + offsets_.w2, s.hidden, s.hidden);
  ConstVecMap b2(p.data() + offsets_.b2, s.hidden);
  ConstMatMap w3(p.data() + offsets_.w3, s.plan_dim, s.hidden);
  ConstVecMap b3(p.data() + offsets_.b3, s.plan_dim);

  Batch h(s.hidden, x.cols());
  h.noalias() = w1 * z;
  h.colwise() += b1;
  Batch a = h.array() * Sigmoid(h).array();
  h.noalias() = w2 * a;
  h.colwise() += b2;
  a = h.array() * Sigmoid(h).array();
  Batch out(s.plan_dim, x.cols());
  out.noalias() = w3 * a;
  out.colwise() += b3;
  if (has_clean_skip()) {
    Eigen::VectorXd gx, gf;
    SkipCoefficients(t, &gx, &gf);
    out = x * gx.asDiagonal() - out * gf.asDiagonal();
  }
  return out;
}

double Denoiser::LossAndGradient(const Batch& x, const std::vector<int>& t,
                                 const Batch& cond, const Batch& target,
                                 Eigen::VectorXd* grad) const {
  const DenoiserShape& s = shape_;
  const Eigen::VectorXd& p = params_;
  const Batch z = BuildInput(p, x, t, cond);
  ConstMatMap w1(p.data() + offsets_.w1, s.hidden, s.input_dim());
  ConstVecMap b1(p.data() + offsets_.b1, s.hidden);
  ConstMatMap w2(p.data() + offsets_.w2, s.hidden, s.hidden);
  ConstVecMap b2(p.data() + offsets_.b2, s.hidden);
  ConstMatMap w3(p.data() + offsets_.w3, s.plan_dim, s.hidden);
  ConstVecMap b3(p.data() + offsets_.b3, s.plan_dim);
  const auto batch = x.cols();

  Batch h1(s.hidden, batch);
  h1.noalias() = w1 * z;
  h1.colwise() += b1;
  const Batch sig1 = Sigmoid(h1);
  const Batch a1 = h1.array() * sig1.array();
  Batch h2(s.hidden, batch);
  h2.noalias() = w2 * a1;
  h2.colwise() += b2;
  const Batch sig2 = Sigmoid(h2);
  const Batch a2 = h2.array() * sig2.array();
  Batch out(s.plan_dim, batch);
  out.noalias() = w3 * a2;
  out.colwise() += b3;
  Eigen::VectorXd gx, gf;
  if (has_clean_skip()) {
    SkipCoefficients(t, &gx, &gf);
    out = x * gx.asDiagonal() - out * gf.asDiagonal();
  }

  const Batch diff = out - target;
  const double count = static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() / count;
  if (grad == nullptr) return loss;

  grad->resize(static_cast<Eigen::Index>(offsets_.total));
  Eigen::VectorXd& g = *grad;
  MatMap g_w1(g.data() + offsets_.w1, s.hidden, s.input_dim());
  MatMap g_w2(g.data() + offsets_.w2, s.hidden, s.hidden);
  MatMap g_w3(g.data() + offsets_.w3, s.plan_dim, s.hidden);
  MatMap g_wc(g.data() + offsets_.wc, s.cond_embed_dim, s.cond_dim);

  Batch d_out = diff * (2.0 / count);
  if (has_clean_skip()) d_out = -(d_out * gf.asDiagonal());
  g_w3.noalias() = d_out * a2.transpose();
  g.segment(offsets_.b3, s.plan_dim) = d_out.rowwise().sum();

  // d silu(h) / dh = sig (1 + h (1 - sig))
  Batch d_h2(s.hidden, batch);
  d_h2.noalias() = w3.transpose() * d_out;
  d_h2.array() *=
      sig2.array() * (1.0 + h2.array() * (1.0 - sig2.array()));
  g_w2.noalias() = d_h2 * a1.transpose();
  g.segment(offsets_.b2, s.hidden) = d_h2.rowwise().sum();

  Batch d_h1(s.hidden, batch);
  d_h1.noalias() = w2.transpose() * d_h2;
  d_h1.array() *=
      sig1.array() * (1.0 + h1.array() * (1.0 - sig1.array()));
  g_w1.noalias() = d_h1 * z.transpose();
  g.segment(offsets_.b1, s.hidden) = d_h1.rowwise().sum();

  // Back into the condition embedding rows of the first-layer input.
  Batch d_cemb(s.cond_embed_dim, batch);
  d_cemb.noalias() = w1.rightCols(s.cond_embed_dim).transpose() * d_h1;
  g_wc.noalias() = d_cemb * cond.transpose();
  g.segment(offsets_.bc, s.cond_embed_dim) = d_cemb.rowwise().sum();
  return loss;
}

}  // namespace adap
