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

#ifndef UFOCTL_MLP_HPP_
#define UFOCTL_MLP_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ufoctl::mlp {

/// Fully connected network with tanh hidden activations and a linear
/// output layer. Parameters are exposed as one flat vector (per layer:
/// row-major weights, then biases) so trust-region updates and
/// checkpointing can treat the network as a point in R^n.
class Mlp {
 public:
  /// Deterministic init: weights N(0, 1/sqrt(fan_in)), biases zero, the
  /// output layer scaled by final_scale.
  Mlp(int input, std::vector<int> hidden, int output, uint64_t seed,
      double final_scale = 1.0);

  int input_size() const { return input_; }
  int output_size() const { return output_; }
  int param_count() const;
  const std::vector<int>& hidden_sizes() const { return hidden_; }

  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& flat);

  /// Cached activations of one forward pass, reused by backward/jvp.
  struct Workspace {
    std::vector<Eigen::VectorXd> act;  // act[0] = input, act[L] = output
  };

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Workspace& ws) const;

  /// Accumulates d(dLdy . y) / dtheta into grad (size param_count).
  void backward(const Workspace& ws, const Eigen::VectorXd& dLdy,
                Eigen::VectorXd& grad) const;

  /// Output tangent under a flat parameter tangent (input held fixed).
  Eigen::VectorXd jvp(const Workspace& ws, const Eigen::VectorXd& tangent) const;

 private:
  struct Layer {
    Eigen::MatrixXd w;
    Eigen::VectorXd b;
  };
  std::vector<Layer> layers_;
  std::vector<int> hidden_;
  int input_ = 0;
  int output_ = 0;
};

/// Adam descent on a flat parameter vector.
class Adam {
 public:
  struct Config {
    double lr = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  explicit Adam(int dim) : Adam(dim, Config{}) {}
  Adam(int dim, Config cfg);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  void reset();
  int steps_taken() const { return t_; }
  const Config& config() const { return cfg_; }

  // Exposed for checkpointing.
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }
  void restore(const Eigen::VectorXd& m, const Eigen::VectorXd& v, int t);

 private:
  Config cfg_;
  Eigen::VectorXd m_, v_;
  int t_ = 0;
};

}  // namespace ufoctl::mlp

#endif  // UFOCTL_MLP_HPP_
