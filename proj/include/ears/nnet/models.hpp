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

#ifndef EARS_NNET_MODELS_HPP_
#define EARS_NNET_MODELS_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ears/nnet/layers.hpp"
#include "ears/rng.hpp"

namespace ears::nnet {

enum class ArchKind { kMlp, kLstm };

// "mlp:896-1024-1024-1024-64" or "lstm:128-512-512-64": layer widths from
// input to output.
struct ArchSpec {
  ArchKind kind = ArchKind::kMlp;
  std::vector<int> sizes;

  static ArchSpec Parse(const std::string& descriptor);
  static ArchSpec Mlp(int input, int hidden, int layers, int output);
  static ArchSpec Lstm(int input, int hidden, int layers, int output);
  std::string ToString() const;

  int input_dim() const { return sizes.front(); }
  int output_dim() const { return sizes.back(); }
};

// A network mapping normalized base features (F x 2B) of one utterance to
// a mask (F x B).
class MaskEstimator {
 public:
  virtual ~MaskEstimator() = default;

  virtual const ArchSpec& arch() const = 0;
  // Inference mode (no dropout, running batch-norm statistics).
  virtual Tensor2 Predict(const Tensor2& features) = 0;
  virtual std::vector<ParamRef> Params() = 0;
  // Everything a checkpoint stores, in a fixed order.
  virtual std::vector<StateRef> State() = 0;

  // Rounds every stored tensor to float32 precision.
  void QuantizeToFloat();
};

// Sigmoid hidden layers with dropout, sigmoid output.
class MlpNet final : public MaskEstimator {
 public:
  explicit MlpNet(ArchSpec arch);

  void Init(Rng& rng);
  const ArchSpec& arch() const override { return arch_; }
  // Context frames on each side implied by the input width.
  int context() const;

  // `x` is already context-expanded.
  Tensor2 Forward(const Tensor2& x, bool training, double keep_prob = 1.0,
                  Rng* rng = nullptr);
  void Backward(const Tensor2& grad_out);

  Tensor2 Predict(const Tensor2& features) override;
  std::vector<ParamRef> Params() override;
  std::vector<StateRef> State() override;

  std::vector<DenseLayer>& layers() { return layers_; }

 private:
  ArchSpec arch_;
  std::vector<DenseLayer> layers_;
  std::vector<Dropout> dropouts_;
};

// Batch norm on the input of every LSTM layer; the last LSTM layer has one
// cell per mask channel and a sigmoid cell output.
class LstmNet final : public MaskEstimator {
 public:
  explicit LstmNet(ArchSpec arch);

  void Init(Rng& rng);
  const ArchSpec& arch() const override { return arch_; }

  // Time-major sequence batch (see ValidRows).
  Tensor2 Forward(const Tensor2& x, std::span<const int> lengths, bool training,
                  double keep_prob = 1.0, Rng* rng = nullptr);
  void Backward(const Tensor2& grad_out);

  Tensor2 Predict(const Tensor2& features) override;
  std::vector<ParamRef> Params() override;
  std::vector<StateRef> State() override;

  std::vector<LstmLayer>& lstms() { return lstms_; }
  std::vector<BatchNorm>& norms() { return norms_; }

 private:
  ArchSpec arch_;
  std::vector<BatchNorm> norms_;
  std::vector<LstmLayer> lstms_;
  std::vector<Dropout> dropouts_;
  std::vector<int> lengths_;
};

std::unique_ptr<MaskEstimator> CreateModel(const ArchSpec& arch, Rng& rng);

}  // namespace ears::nnet

#endif  // EARS_NNET_MODELS_HPP_
