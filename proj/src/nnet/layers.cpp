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

#include "ears/nnet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ears/error.hpp"

namespace ears::nnet {
namespace {

void RequireShape(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::kShapeMismatch, what);
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor2 Activate(const Tensor2& z, Activation act) {
  switch (act) {
    case Activation::kIdentity: return z;
    case Activation::kSigmoid: return z.unaryExpr([](double v) { return Sigmoid(v); });
    case Activation::kTanh: return z.array().tanh().matrix();
  }
  return z;
}

Tensor2 ActivationGrad(const Tensor2& y, Activation act) {
  switch (act) {
    case Activation::kIdentity: return Tensor2::Ones(y.rows(), y.cols());
    case Activation::kSigmoid: return (y.array() * (1.0 - y.array())).matrix();
    case Activation::kTanh: return (1.0 - y.array().square()).matrix();
  }
  return y;
}

void GlorotUniform(Tensor2& w, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.Uniform(-limit, limit);
}

// ---------------------------------------------------------------------------
// DenseLayer

DenseLayer::DenseLayer(int in, int out, Activation act)
    : weight(Tensor2::Zero(out, in)),
      bias(Tensor2::Zero(1, out)),
      grad_weight(Tensor2::Zero(out, in)),
      grad_bias(Tensor2::Zero(1, out)),
      activation(act) {}

void DenseLayer::Init(Rng& rng) {
  GlorotUniform(weight, in_dim(), out_dim(), rng);
  bias.setZero();
}

Tensor2 DenseLayer::Forward(const Tensor2& x) {
  RequireShape(x.cols() == weight.cols(),
               "dense input has " + std::to_string(x.cols()) + " columns, expected " +
                   std::to_string(weight.cols()));
  input_ = x;
  Tensor2 z = x * weight.transpose();
  z.rowwise() += bias.row(0);
  output_ = Activate(z, activation);
  return output_;
}

Tensor2 DenseLayer::Backward(const Tensor2& grad_out) {
  RequireShape(grad_out.rows() == output_.rows() && grad_out.cols() == output_.cols(),
               "dense backward gradient shape");
  const Tensor2 dz = (grad_out.array() * ActivationGrad(output_, activation).array()).matrix();
  grad_weight.noalias() = dz.transpose() * input_;
  grad_bias = dz.colwise().sum();
  return dz * weight;
}

void DenseLayer::CollectParams(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".W", &weight, &grad_weight});
  out.push_back({prefix + ".b", &bias, &grad_bias});
}

void DenseLayer::CollectState(const std::string& prefix, std::vector<StateRef>& out) {
  out.push_back({prefix + ".W", &weight});
  out.push_back({prefix + ".b", &bias});
}

// ---------------------------------------------------------------------------
// Dropout

Tensor2 Dropout::Forward(const Tensor2& x, double keep_prob, Rng& rng, bool training) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw Error(Errc::kInvalidParams, "keep_prob must lie in (0, 1]");
  }
  active_ = training && keep_prob < 1.0;
  if (!active_) return x;
  scale_.resize(x.rows(), x.cols());
  const double inv = 1.0 / keep_prob;
  for (Eigen::Index i = 0; i < scale_.size(); ++i) {
    scale_.data()[i] = rng.Uniform() < keep_prob ? inv : 0.0;
  }
  return (x.array() * scale_.array()).matrix();
}

Tensor2 Dropout::Backward(const Tensor2& grad_out) const {
  if (!active_) return grad_out;
  return (grad_out.array() * scale_.array()).matrix();
}

// ---------------------------------------------------------------------------
// BatchNorm

BatchNorm::BatchNorm(int dim, double momentum_in, double eps_in)
    : gamma(Tensor2::Ones(1, dim)),
      beta(Tensor2::Zero(1, dim)),
      running_mean(Tensor2::Zero(1, dim)),
      running_var(Tensor2::Ones(1, dim)),
      grad_gamma(Tensor2::Zero(1, dim)),
      grad_beta(Tensor2::Zero(1, dim)),
      momentum(momentum_in),
      eps(eps_in) {}

Tensor2 BatchNorm::Forward(const Tensor2& x, bool training,
                           const std::vector<std::uint8_t>* row_valid) {
  const Eigen::Index dim = gamma.cols();
  RequireShape(x.cols() == dim, "batch-norm input width");
  RequireShape(row_valid == nullptr || static_cast<Eigen::Index>(row_valid->size()) == x.rows(),
               "batch-norm row mask length");
  training_ = training;
  valid_ = row_valid ? *row_valid : std::vector<std::uint8_t>(x.rows(), 1);

  RowVector mean, var;
  if (training) {
    mean = RowVector::Zero(dim);
    count_ = 0.0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if (!valid_[r]) continue;
      mean += x.row(r);
      count_ += 1.0;
    }
    if (count_ == 0.0) throw Error(Errc::kShapeMismatch, "batch-norm over an empty batch");
    mean /= count_;
    var = RowVector::Zero(dim);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if (!valid_[r]) continue;
      var += (x.row(r) - mean).array().square().matrix();
    }
    var /= count_;
    running_mean = momentum * running_mean + (1.0 - momentum) * mean;
    running_var = momentum * running_var + (1.0 - momentum) * var;
  } else {
    mean = running_mean.row(0);
    var = running_var.row(0);
  }
  inv_std_ = (var.array() + eps).rsqrt().matrix();
  normalized_ = ((x.rowwise() - mean).array().rowwise() * inv_std_.array()).matrix();
  Tensor2 y = (normalized_.array().rowwise() * gamma.row(0).array()).matrix();
  y.rowwise() += beta.row(0);
  return y;
}

Tensor2 BatchNorm::Backward(const Tensor2& grad_out) {
  RequireShape(grad_out.rows() == normalized_.rows() && grad_out.cols() == normalized_.cols(),
               "batch-norm backward gradient shape");
  const Eigen::Index dim = gamma.cols();
  grad_gamma = Tensor2::Zero(1, dim);
  grad_beta = Tensor2::Zero(1, dim);
  RowVector sum_dxhat = RowVector::Zero(dim);
  RowVector sum_dxhat_xhat = RowVector::Zero(dim);
  for (Eigen::Index r = 0; r < grad_out.rows(); ++r) {
    if (!valid_[r]) continue;
    grad_gamma.row(0) += (grad_out.row(r).array() * normalized_.row(r).array()).matrix();
    grad_beta.row(0) += grad_out.row(r);
    const RowVector dxhat = (grad_out.row(r).array() * gamma.row(0).array()).matrix();
    sum_dxhat += dxhat;
    sum_dxhat_xhat += (dxhat.array() * normalized_.row(r).array()).matrix();
  }
  Tensor2 dx = Tensor2::Zero(grad_out.rows(), dim);
  for (Eigen::Index r = 0; r < grad_out.rows(); ++r) {
    if (!valid_[r]) continue;
    const RowVector dxhat = (grad_out.row(r).array() * gamma.row(0).array()).matrix();
    if (training_) {
      dx.row(r) = (inv_std_.array() / count_ *
                   (count_ * dxhat.array() - sum_dxhat.array() -
                    normalized_.row(r).array() * sum_dxhat_xhat.array()))
                      .matrix();
    } else {
      dx.row(r) = (dxhat.array() * inv_std_.array()).matrix();
    }
  }
  return dx;
}

void BatchNorm::CollectParams(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".gamma", &gamma, &grad_gamma});
  out.push_back({prefix + ".beta", &beta, &grad_beta});
}

void BatchNorm::CollectState(const std::string& prefix, std::vector<StateRef>& out) {
  out.push_back({prefix + ".gamma", &gamma});
  out.push_back({prefix + ".beta", &beta});
  out.push_back({prefix + ".running_mean", &running_mean});
  out.push_back({prefix + ".running_var", &running_var});
}

// ---------------------------------------------------------------------------
// LSTM

std::vector<std::uint8_t> ValidRows(int steps, std::span<const int> lengths) {
  const auto batch = lengths.size();
  std::vector<std::uint8_t> valid(static_cast<std::size_t>(steps) * batch, 0);
  for (int t = 0; t < steps; ++t) {
    for (std::size_t b = 0; b < batch; ++b) {
      valid[t * batch + b] = t < lengths[b] ? 1 : 0;
    }
  }
  return valid;
}

LstmLayer::LstmLayer(int in, int hidden_dim, Activation cell_act)
    : weight(Tensor2::Zero(4 * hidden_dim, in)),
      recurrent(Tensor2::Zero(4 * hidden_dim, hidden_dim)),
      bias(Tensor2::Zero(1, 4 * hidden_dim)),
      grad_weight(Tensor2::Zero(4 * hidden_dim, in)),
      grad_recurrent(Tensor2::Zero(4 * hidden_dim, hidden_dim)),
      grad_bias(Tensor2::Zero(1, 4 * hidden_dim)),
      cell_activation(cell_act) {}

void LstmLayer::Init(Rng& rng) {
  const int h = hidden();
  GlorotUniform(weight, in_dim(), h, rng);
  GlorotUniform(recurrent, h, h, rng);
  bias.setZero();
  bias.block(0, h, 1, h).setOnes();
}

Tensor2 LstmLayer::Forward(const Tensor2& x, std::span<const int> lengths) {
  const int h = hidden();
  batch_ = static_cast<int>(lengths.size());
  RequireShape(batch_ > 0 && x.rows() % batch_ == 0, "lstm input rows not a multiple of batch");
  RequireShape(x.cols() == weight.cols(), "lstm input width " + std::to_string(x.cols()) +
                                              ", expected " + std::to_string(weight.cols()));
  steps_ = static_cast<int>(x.rows() / batch_);
  for (int len : lengths) RequireShape(len >= 0 && len <= steps_, "lstm length exceeds steps");
  lengths_.assign(lengths.begin(), lengths.end());
  valid_ = ValidRows(steps_, lengths);
  const int active_steps = *std::max_element(lengths_.begin(), lengths_.end());

  input_ = x;
  const Eigen::Index rows = x.rows();
  gates_ = Tensor2::Zero(rows, 4 * h);
  cells_ = Tensor2::Zero(rows, h);
  cell_act_ = Tensor2::Zero(rows, h);
  hidden_ = Tensor2::Zero(rows, h);

  Tensor2 h_prev = Tensor2::Zero(batch_, h);
  Tensor2 c_prev = Tensor2::Zero(batch_, h);
  for (int t = 0; t < active_steps; ++t) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(t) * batch_;
    Tensor2 z = x.middleRows(r0, batch_) * weight.transpose();
    z.noalias() += h_prev * recurrent.transpose();
    z.rowwise() += bias.row(0);
    Tensor2 act(batch_, 4 * h);
    act.leftCols(3 * h) = Activate(z.leftCols(3 * h), Activation::kSigmoid);
    act.rightCols(h) = z.rightCols(h).array().tanh().matrix();
    const auto i = act.leftCols(h).array();
    const auto f = act.middleCols(h, h).array();
    const auto o = act.middleCols(2 * h, h).array();
    const auto g = act.rightCols(h).array();
    const Tensor2 c = (f * c_prev.array() + i * g).matrix();
    const Tensor2 ca = Activate(c, cell_activation);
    const Tensor2 hh = (o * ca.array()).matrix();
    gates_.middleRows(r0, batch_) = act;
    cells_.middleRows(r0, batch_) = c;
    cell_act_.middleRows(r0, batch_) = ca;
    hidden_.middleRows(r0, batch_) = hh;
    h_prev = hh;
    c_prev = c;
  }
  return hidden_;
}

Tensor2 LstmLayer::Backward(const Tensor2& grad_h) {
  const int h = hidden();
  RequireShape(grad_h.rows() == hidden_.rows() && grad_h.cols() == h, "lstm backward shape");
  grad_weight.setZero();
  grad_recurrent.setZero();
  grad_bias.setZero();
  Tensor2 dx = Tensor2::Zero(input_.rows(), input_.cols());
  const int active_steps = *std::max_element(lengths_.begin(), lengths_.end());

  Tensor2 dh_next = Tensor2::Zero(batch_, h);
  Tensor2 dc_next = Tensor2::Zero(batch_, h);
  Tensor2 dz(batch_, 4 * h);
  for (int t = active_steps - 1; t >= 0; --t) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(t) * batch_;
    Tensor2 dh = grad_h.middleRows(r0, batch_) + dh_next;
    Tensor2 dc = dc_next;
    for (int b = 0; b < batch_; ++b) {
      if (!valid_[r0 + b]) {
        dh.row(b).setZero();
        dc.row(b).setZero();
      }
    }
    const auto act = gates_.middleRows(r0, batch_);
    const auto i = act.leftCols(h).array();
    const auto f = act.middleCols(h, h).array();
    const auto o = act.middleCols(2 * h, h).array();
    const auto g = act.rightCols(h).array();
    const auto ca = cell_act_.middleRows(r0, batch_);
    Tensor2 c_prev = t > 0 ? Tensor2(cells_.middleRows(r0 - batch_, batch_))
                           : Tensor2::Zero(batch_, h);
    Tensor2 h_prev = t > 0 ? Tensor2(hidden_.middleRows(r0 - batch_, batch_))
                           : Tensor2::Zero(batch_, h);

    dc.array() += dh.array() * o * ActivationGrad(ca, cell_activation).array();
    dz.leftCols(h) = (dc.array() * g * i * (1.0 - i)).matrix();
    dz.middleCols(h, h) = (dc.array() * c_prev.array() * f * (1.0 - f)).matrix();
    dz.middleCols(2 * h, h) = (dh.array() * ca.array() * o * (1.0 - o)).matrix();
    dz.rightCols(h) = (dc.array() * i * (1.0 - g.square())).matrix();

    grad_weight.noalias() += dz.transpose() * input_.middleRows(r0, batch_);
    grad_recurrent.noalias() += dz.transpose() * h_prev;
    grad_bias += dz.colwise().sum();
    dx.middleRows(r0, batch_).noalias() = dz * weight;
    dh_next.noalias() = dz * recurrent;
    dc_next = (dc.array() * f).matrix();
  }
  return dx;
}

void LstmLayer::CollectParams(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".W", &weight, &grad_weight});
  out.push_back({prefix + ".U", &recurrent, &grad_recurrent});
  out.push_back({prefix + ".b", &bias, &grad_bias});
}

void LstmLayer::CollectState(const std::string& prefix, std::vector<StateRef>& out) {
  out.push_back({prefix + ".W", &weight});
  out.push_back({prefix + ".U", &recurrent});
  out.push_back({prefix + ".b", &bias});
}

// ---------------------------------------------------------------------------

LossResult MseLoss(const Tensor2& pred, const Tensor2& target,
                   const std::vector<std::uint8_t>* row_valid) {
  RequireShape(pred.rows() == target.rows() && pred.cols() == target.cols(),
               "mse prediction/target shape");
  RequireShape(row_valid == nullptr || static_cast<Eigen::Index>(row_valid->size()) == pred.rows(),
               "mse row mask length");
  LossResult out;
  out.grad = Tensor2::Zero(pred.rows(), pred.cols());
  double count = 0.0;
  double sum = 0.0;
  for (Eigen::Index r = 0; r < pred.rows(); ++r) {
    if (row_valid && !(*row_valid)[r]) continue;
    const RowVector diff = pred.row(r) - target.row(r);
    sum += diff.squaredNorm();
    out.grad.row(r) = diff;
    count += static_cast<double>(pred.cols());
  }
  if (count == 0.0) return out;
  out.loss = sum / count;
  out.grad *= 2.0 / count;
  return out;
}

}  // namespace ears::nnet
