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

#include "ears/nnet/models.hpp"

#include <charconv>
#include <string>

#include "ears/error.hpp"
#include "ears/features.hpp"

namespace ears::nnet {
namespace {

ArchSpec Stack(ArchKind kind, int input, int hidden, int layers, int output) {
  ArchSpec a;
  a.kind = kind;
  a.sizes.push_back(input);
  for (int i = 0; i < layers; ++i) a.sizes.push_back(hidden);
  a.sizes.push_back(output);
  return a;
}

}  // namespace

ArchSpec ArchSpec::Parse(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const auto bad = [&](const std::string& why) {
    return Error(Errc::kCheckpointCorrupt, "architecture '" + descriptor + "': " + why);
  };
  if (colon == std::string::npos) throw bad("missing ':'");
  ArchSpec a;
  const std::string kind = descriptor.substr(0, colon);
  if (kind == "mlp") {
    a.kind = ArchKind::kMlp;
  } else if (kind == "lstm") {
    a.kind = ArchKind::kLstm;
  } else {
    throw bad("unknown kind");
  }
  std::string_view rest(descriptor);
  rest.remove_prefix(colon + 1);
  while (!rest.empty()) {
    const auto dash = rest.find('-');
    const std::string_view item = rest.substr(0, dash);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v <= 0) {
      throw bad("bad layer width");
    }
    a.sizes.push_back(v);
    rest = dash == std::string_view::npos ? std::string_view() : rest.substr(dash + 1);
  }
  if (a.sizes.size() < 2) throw bad("need at least input and output widths");
  return a;
}

ArchSpec ArchSpec::Mlp(int input, int hidden, int layers, int output) {
  return Stack(ArchKind::kMlp, input, hidden, layers, output);
}

ArchSpec ArchSpec::Lstm(int input, int hidden, int layers, int output) {
  return Stack(ArchKind::kLstm, input, hidden, layers, output);
}

std::string ArchSpec::ToString() const {
  std::string s = kind == ArchKind::kMlp ? "mlp:" : "lstm:";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) s += '-';
    s += std::to_string(sizes[i]);
  }
  return s;
}

void MaskEstimator::QuantizeToFloat() {
  for (auto& s : State()) {
    for (Eigen::Index i = 0; i < s.value->size(); ++i) {
      s.value->data()[i] = static_cast<double>(static_cast<float>(s.value->data()[i]));
    }
  }
}

// ---------------------------------------------------------------------------

MlpNet::MlpNet(ArchSpec arch) : arch_(std::move(arch)) {
  if (arch_.kind != ArchKind::kMlp) throw Error(Errc::kInvalidParams, "not an mlp descriptor");
  for (std::size_t i = 0; i + 1 < arch_.sizes.size(); ++i) {
    layers_.emplace_back(arch_.sizes[i], arch_.sizes[i + 1], Activation::kSigmoid);
  }
  dropouts_.resize(layers_.size() - 1);
  context();
}

void MlpNet::Init(Rng& rng) {
  for (auto& l : layers_) l.Init(rng);
}

int MlpNet::context() const {
  const int base = 2 * arch_.output_dim();
  const int in = arch_.input_dim();
  if (in % base != 0 || (in / base) % 2 != 1) {
    throw Error(Errc::kInvalidParams,
                "mlp input width " + std::to_string(in) +
                    " is not an odd multiple of twice the output width");
  }
  return (in / base - 1) / 2;
}

Tensor2 MlpNet::Forward(const Tensor2& x, bool training, double keep_prob, Rng* rng) {
  if (training && keep_prob < 1.0 && rng == nullptr) {
    throw Error(Errc::kInvalidParams, "dropout needs a random source");
  }
  Rng unused(0);
  Tensor2 h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i].Forward(h);
    if (i + 1 < layers_.size()) {
      h = dropouts_[i].Forward(h, keep_prob, rng ? *rng : unused, training);
    }
  }
  return h;
}

void MlpNet::Backward(const Tensor2& grad_out) {
  Tensor2 g = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    if (i + 1 < layers_.size()) g = dropouts_[i].Backward(g);
    g = layers_[i].Backward(g);
  }
}

Tensor2 MlpNet::Predict(const Tensor2& features) {
  return Forward(ContextExpand(features, context()), false);
}

std::vector<ParamRef> MlpNet::Params() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].CollectParams("dense" + std::to_string(i), out);
  }
  return out;
}

std::vector<StateRef> MlpNet::State() {
  std::vector<StateRef> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].CollectState("dense" + std::to_string(i), out);
  }
  return out;
}

// ---------------------------------------------------------------------------

LstmNet::LstmNet(ArchSpec arch) : arch_(std::move(arch)) {
  if (arch_.kind != ArchKind::kLstm) throw Error(Errc::kInvalidParams, "not an lstm descriptor");
  const std::size_t n = arch_.sizes.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    norms_.emplace_back(arch_.sizes[i]);
    lstms_.emplace_back(arch_.sizes[i], arch_.sizes[i + 1],
                        i + 1 == n ? Activation::kSigmoid : Activation::kTanh);
  }
  dropouts_.resize(n - 1);
}

void LstmNet::Init(Rng& rng) {
  for (auto& l : lstms_) l.Init(rng);
}

Tensor2 LstmNet::Forward(const Tensor2& x, std::span<const int> lengths, bool training,
                         double keep_prob, Rng* rng) {
  if (training && keep_prob < 1.0 && rng == nullptr) {
    throw Error(Errc::kInvalidParams, "dropout needs a random source");
  }
  if (lengths.empty() || x.rows() % static_cast<Eigen::Index>(lengths.size()) != 0) {
    throw Error(Errc::kShapeMismatch, "sequence batch rows not a multiple of batch size");
  }
  lengths_.assign(lengths.begin(), lengths.end());
  const int steps = static_cast<int>(x.rows() / static_cast<Eigen::Index>(lengths.size()));
  const auto valid = ValidRows(steps, lengths);
  Rng unused(0);
  Tensor2 h = x;
  for (std::size_t i = 0; i < lstms_.size(); ++i) {
    h = norms_[i].Forward(h, training, &valid);
    h = lstms_[i].Forward(h, lengths);
    if (i + 1 < lstms_.size()) {
      h = dropouts_[i].Forward(h, keep_prob, rng ? *rng : unused, training);
    }
  }
  return h;
}

void LstmNet::Backward(const Tensor2& grad_out) {
  Tensor2 g = grad_out;
  for (std::size_t i = lstms_.size(); i-- > 0;) {
    if (i + 1 < lstms_.size()) g = dropouts_[i].Backward(g);
    g = lstms_[i].Backward(g);
    g = norms_[i].Backward(g);
  }
}

Tensor2 LstmNet::Predict(const Tensor2& features) {
  const int len = static_cast<int>(features.rows());
  if (len == 0) return Tensor2(0, arch_.output_dim());
  return Forward(features, std::span<const int>(&len, 1), false);
}

std::vector<ParamRef> LstmNet::Params() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < lstms_.size(); ++i) {
    norms_[i].CollectParams("bn" + std::to_string(i), out);
    lstms_[i].CollectParams("lstm" + std::to_string(i), out);
  }
  return out;
}

std::vector<StateRef> LstmNet::State() {
  std::vector<StateRef> out;
  for (std::size_t i = 0; i < lstms_.size(); ++i) {
    norms_[i].CollectState("bn" + std::to_string(i), out);
    lstms_[i].CollectState("lstm" + std::to_string(i), out);
  }
  return out;
}

std::unique_ptr<MaskEstimator> CreateModel(const ArchSpec& arch, Rng& rng) {
  if (arch.kind == ArchKind::kMlp) {
    auto m = std::make_unique<MlpNet>(arch);
    m->Init(rng);
    return m;
  }
  auto m = std::make_unique<LstmNet>(arch);
  m->Init(rng);
  return m;
}

}  // namespace ears::nnet
