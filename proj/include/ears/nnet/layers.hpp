// Copyright 2026 The EARS Authors.
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

#ifndef EARS_NNET_LAYERS_HPP_
#define EARS_NNET_LAYERS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ears/matrix.hpp"
#include "ears/rng.hpp"

namespace ears::nnet {

using Tensor2 = Matrix;

// A trainable tensor and the slot its gradient is written to.
struct ParamRef {
  std::string name;
  Tensor2* value = nullptr;
  Tensor2* grad = nullptr;
};

// Any tensor that belongs in a checkpoint, trainable or not.
struct StateRef {
  std::string name;
  Tensor2* value = nullptr;
};

enum class Activation { kIdentity, kSigmoid, kTanh };

double Sigmoid(double x);
Tensor2 Activate(const Tensor2& z, Activation act);
// Derivative expressed through the activation output.
Tensor2 ActivationGrad(const Tensor2& y, Activation act);

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void GlorotUniform(Tensor2& w, int fan_in, int fan_out, Rng& rng);

// Y = act(X W^T + b)
class DenseLayer {
 public:
  DenseLayer() = default;
  DenseLayer(int in, int out, Activation act);

  void Init(Rng& rng);
  Tensor2 Forward(const Tensor2& x);
  // Writes dW, db and returns dL/dX. Uses the inputs of the last Forward.
  Tensor2 Backward(const Tensor2& grad_out);

  void CollectParams(const std::string& prefix, std::vector<ParamRef>& out);
  void CollectState(const std::string& prefix, std::vector<StateRef>& out);

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }

  Tensor2 weight;  // out x in
  Tensor2 bias;    // 1 x out
  Tensor2 grad_weight;
  Tensor2 grad_bias;
  Activation activation = Activation::kIdentity;

 private:
  Tensor2 input_;
  Tensor2 output_;
};

// Inverted dropout: survivors are scaled by 1/keep_prob while training;
// identity at inference.
class Dropout {
 public:
  Tensor2 Forward(const Tensor2& x, double keep_prob, Rng& rng, bool training);
  Tensor2 Backward(const Tensor2& grad_out) const;

 private:
  Tensor2 scale_;
  bool active_ = false;
};

// Per-feature batch normalization. Rows flagged invalid (padding) are left
// out of the batch statistics and receive no gradient.
class BatchNorm {
 public:
  BatchNorm() = default;
  explicit BatchNorm(int dim, double momentum = 0.9, double eps = 1e-5);

  Tensor2 Forward(const Tensor2& x, bool training,
                  const std::vector<std::uint8_t>* row_valid = nullptr);
  Tensor2 Backward(const Tensor2& grad_out);

  void CollectParams(const std::string& prefix, std::vector<ParamRef>& out);
  void CollectState(const std::string& prefix, std::vector<StateRef>& out);

  Tensor2 gamma, beta;                   // 1 x dim
  Tensor2 running_mean, running_var;     // 1 x dim
  Tensor2 grad_gamma, grad_beta;
  double momentum = 0.9;
  double eps = 1e-5;

 private:
  Tensor2 normalized_;
  RowVector inv_std_;
  std::vector<std::uint8_t> valid_;
  bool training_ = false;
  double count_ = 0.0;
};

// Sequence batches are stored time-major: row t * batch + b holds frame t of
// sequence b. Frames at t >= lengths[b] are padding.
std::vector<std::uint8_t> ValidRows(int steps, std::span<const int> lengths);

// Gates i, f, o use sigmoid; the candidate uses tanh; the cell output uses
// `cell_activation` (tanh, or sigmoid for a mask-valued output layer).
class LstmLayer {
 public:
  LstmLayer() = default;
  LstmLayer(int in, int hidden, Activation cell_activation = Activation::kTanh);

  // Glorot weights, zero biases except the forget gate (1.0).
  void Init(Rng& rng);
  Tensor2 Forward(const Tensor2& x, std::span<const int> lengths);
  // BPTT; returns dL/dx and writes the parameter gradients. Gradients at
  // padded frames are dropped.
  Tensor2 Backward(const Tensor2& grad_h);

  void CollectParams(const std::string& prefix, std::vector<ParamRef>& out);
  void CollectState(const std::string& prefix, std::vector<StateRef>& out);

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int hidden() const { return static_cast<int>(recurrent.cols()); }

  // Row blocks [i; f; o; g].
  Tensor2 weight;     // 4H x in
  Tensor2 recurrent;  // 4H x H
  Tensor2 bias;       // 1 x 4H
  Tensor2 grad_weight, grad_recurrent, grad_bias;
  Activation cell_activation = Activation::kTanh;

 private:
  int batch_ = 0;
  int steps_ = 0;
  std::vector<int> lengths_;
  std::vector<std::uint8_t> valid_;
  Tensor2 input_;
  Tensor2 gates_;   // (T*batch) x 4H, post-activation
  Tensor2 cells_;   // (T*batch) x H
  Tensor2 cell_act_;
  Tensor2 hidden_;
};

struct LossResult {
  double loss = 0.0;
  Tensor2 grad;
};

// Mean squared error over included rows; grad = 2 (pred - target) / count.
LossResult MseLoss(const Tensor2& pred, const Tensor2& target,
                   const std::vector<std::uint8_t>* row_valid = nullptr);

}  // namespace ears::nnet

#endif  // EARS_NNET_LAYERS_HPP_
