// Copyright 2026 The ufoctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ufoctl/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "ufoctl/rng.hpp"

namespace ufoctl::mlp {

Mlp::Mlp(int input, std::vector<int> hidden, int output, uint64_t seed, double final_scale)
    : hidden_(std::move(hidden)), input_(input), output_(output) {
  rng::Stream stream(rng::derive(seed, /*purpose=*/0x6d6c70 /* "mlp" */));
  int fan_in = input_;
  std::vector<int> widths = hidden_;
  widths.push_back(output_);
  for (size_t l = 0; l < widths.size(); ++l) {
    Layer layer;
    layer.w.resize(widths[l], fan_in);
    const double scale =
        (l + 1 == widths.size() ? final_scale : 1.0) / std::sqrt(double(fan_in));
    for (int r = 0; r < layer.w.rows(); ++r)
      for (int c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = scale * stream.gaussian();
    layer.b = Eigen::VectorXd::Zero(widths[l]);
    layers_.push_back(std::move(layer));
    fan_in = widths[l];
  }
}

int Mlp::param_count() const {
  int n = 0;
  for (const auto& l : layers_) n += int(l.w.size() + l.b.size());
  return n;
}

Eigen::VectorXd Mlp::params() const {
  Eigen::VectorXd flat(param_count());
  int at = 0;
  for (const auto& l : layers_) {
    for (int r = 0; r < l.w.rows(); ++r)
      for (int c = 0; c < l.w.cols(); ++c) flat(at++) = l.w(r, c);
    for (int r = 0; r < l.b.size(); ++r) flat(at++) = l.b(r);
  }
  return flat;
}

void Mlp::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("parameter vector size mismatch");
  }
  int at = 0;
  for (auto& l : layers_) {
    for (int r = 0; r < l.w.rows(); ++r)
      for (int c = 0; c < l.w.cols(); ++c) l.w(r, c) = flat(at++);
    for (int r = 0; r < l.b.size(); ++r) l.b(r) = flat(at++);
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Workspace ws;
  return forward(x, ws);
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Workspace& ws) const {
  if (x.size() != input_) throw std::invalid_argument("input size mismatch");
  ws.act.assign(1, x);
  Eigen::VectorXd a = x;
  for (size_t l = 0; l < layers_.size(); ++l) {
    a = layers_[l].w * a + layers_[l].b;
    if (l + 1 < layers_.size()) a = a.array().tanh();
    ws.act.push_back(a);
  }
  return a;
}

void Mlp::backward(const Workspace& ws, const Eigen::VectorXd& dLdy,
                   Eigen::VectorXd& grad) const {
  if (grad.size() != param_count()) grad = Eigen::VectorXd::Zero(param_count());
  // Parameter offsets of each layer in the flat vector.
  std::vector<int> offset(layers_.size());
  int at = 0;
  for (size_t l = 0; l < layers_.size(); ++l) {
    offset[l] = at;
    at += int(layers_[l].w.size() + layers_[l].b.size());
  }
  Eigen::VectorXd delta = dLdy;
  for (int l = int(layers_.size()) - 1; l >= 0; --l) {
    const Eigen::VectorXd& a_prev = ws.act[l];
    int p = offset[l];
    for (int r = 0; r < layers_[l].w.rows(); ++r)
      for (int c = 0; c < layers_[l].w.cols(); ++c) grad(p++) += delta(r) * a_prev(c);
    for (int r = 0; r < layers_[l].b.size(); ++r) grad(p++) += delta(r);
    if (l > 0) {
      delta = layers_[l].w.transpose() * delta;
      // act[l] is tanh output of layer l-1
      delta.array() *= (1.0 - ws.act[l].array().square());
    }
  }
}

Eigen::VectorXd Mlp::jvp(const Workspace& ws, const Eigen::VectorXd& tangent) const {
  if (tangent.size() != param_count()) {
    throw std::invalid_argument("tangent size mismatch");
  }
  Eigen::VectorXd da = Eigen::VectorXd::Zero(input_);
  int at = 0;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const Eigen::VectorXd& a_prev = ws.act[l];
    Eigen::VectorXd dz = layers_[l].w * da;
    for (int r = 0; r < layers_[l].w.rows(); ++r)
      for (int c = 0; c < layers_[l].w.cols(); ++c) dz(r) += tangent(at++) * a_prev(c);
    for (int r = 0; r < layers_[l].b.size(); ++r) dz(r) += tangent(at++);
    if (l + 1 < layers_.size()) {
      dz.array() *= (1.0 - ws.act[l + 1].array().square());
    }
    da = std::move(dz);
  }
  return da;
}

Adam::Adam(int dim, Config cfg) : cfg_(cfg) {
  m_ = Eigen::VectorXd::Zero(dim);
  v_ = Eigen::VectorXd::Zero(dim);
}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam dimension mismatch");
  }
  ++t_;
  m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
  v_ = cfg_.beta2 * v_.array().matrix() + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  const Eigen::ArrayXd mhat = m_.array() / bc1;
  const Eigen::ArrayXd vhat = v_.array() / bc2;
  params.array() -= cfg_.lr * mhat / (vhat.sqrt() + cfg_.eps);
}

void Adam::reset() {
  m_.setZero();
  v_.setZero();
  t_ = 0;
}

void Adam::restore(const Eigen::VectorXd& m, const Eigen::VectorXd& v, int t) {
  if (m.size() != m_.size() || v.size() != v_.size()) {
    throw std::invalid_argument("Adam state size mismatch");
  }
  m_ = m;
  v_ = v;
  t_ = t;
}

}  // namespace ufoctl::mlp
