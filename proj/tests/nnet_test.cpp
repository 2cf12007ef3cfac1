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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ears/nnet/adam.hpp"
#include "ears/nnet/checkpoint.hpp"
#include "ears/nnet/gradcheck.hpp"
#include "ears/nnet/layers.hpp"
#include "ears/nnet/models.hpp"
#include "test_signals.hpp"

namespace ears::nnet {
namespace {

using Catch::Approx;
using testing::ThrownCode;

constexpr double kGradTolerance = 1e-4;

Tensor2 RandomTensor(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
  Tensor2 t(rows, cols);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.Uniform(lo, hi);
  return t;
}

// Projection loss sum(R .* Y); R is fixed so gradients are O(1).
double Project(const Tensor2& y, const Tensor2& r) { return (y.array() * r.array()).sum(); }

TEST_CASE("dense forward basics") {
  DenseLayer d(3, 3, Activation::kIdentity);
  d.weight = Tensor2::Identity(3, 3);
  d.bias = Tensor2::Zero(1, 3);
  Rng rng(1);
  const Tensor2 x = RandomTensor(rng, 4, 3);
  CHECK(d.Forward(x) == x);
  CHECK(Sigmoid(0.0) == 0.5);
  CHECK(ThrownCode([&] { d.Forward(Tensor2::Zero(2, 5)); }) == Errc::kShapeMismatch);
}

TEST_CASE("dense + sigmoid gradients") {
  Rng rng(2);
  DenseLayer d(5, 3, Activation::kSigmoid);
  d.Init(rng);
  d.bias = RandomTensor(rng, 1, 3);
  Tensor2 x = RandomTensor(rng, 4, 5, -2.0, 2.0);
  const Tensor2 r = RandomTensor(rng, 4, 3);
  d.Forward(x);
  Tensor2 dx = d.Backward(r);
  std::vector<ParamRef> params;
  d.CollectParams("dense", params);
  params.push_back({"x", &x, &dx});
  const auto res = FiniteDiffCheck([&] { return Project(d.Forward(x), r); }, params);
  CHECK(res.checked == 5 * 3 + 3 + 4 * 5);
  CHECK(res.max_rel_error < kGradTolerance);
}

TEST_CASE("corrupted backward is detected") {
  Rng rng(3);
  DenseLayer d(4, 2, Activation::kSigmoid);
  d.Init(rng);
  const Tensor2 x = RandomTensor(rng, 3, 4);
  const Tensor2 r = RandomTensor(rng, 3, 2);
  d.Forward(x);
  d.Backward(r);
  d.grad_weight = -d.grad_weight;
  std::vector<ParamRef> params;
  d.CollectParams("dense", params);
  const auto res = FiniteDiffCheck([&] { return Project(d.Forward(x), r); }, params);
  CHECK(res.max_rel_error > 0.1);
  CHECK(res.worst_param == "dense.W");
}

TEST_CASE("relative error definition") {
  CHECK(RelativeError(1.0, 1.0) == 0.0);
  CHECK(RelativeError(1.0, -1.0) == 2.0);
  CHECK(RelativeError(0.0, 0.0) == 0.0);
  CHECK(RelativeError(1e-9, 0.0) == Approx(0.1));
}

TEST_CASE("dropout") {
  Rng rng(4);
  Dropout drop;
  const Tensor2 x = RandomTensor(rng, 10, 10);
  CHECK(drop.Forward(x, 1.0, rng, true) == x);
  CHECK(drop.Forward(x, 0.5, rng, false) == x);
  const Tensor2 ones = Tensor2::Ones(1000, 1000);
  const Tensor2 y = drop.Forward(ones, 0.9, rng, true);
  CHECK(y.mean() == Approx(1.0).margin(0.01));
  const double kept = (y.array() > 0.0).cast<double>().mean();
  CHECK(kept == Approx(0.9).margin(0.005));
  // Backward applies the same mask.
  CHECK(drop.Backward(ones) == y);
}

TEST_CASE("batch norm forward identities") {
  BatchNorm bn(3);
  const Tensor2 constant = Tensor2::Constant(6, 3, 2.5);
  CHECK(bn.Forward(constant, true).cwiseAbs().maxCoeff() == 0.0);
  bn.gamma.setZero();
  bn.beta << 0.1, -0.2, 0.3;
  Rng rng(5);
  const Tensor2 y = bn.Forward(RandomTensor(rng, 6, 3), true);
  for (Eigen::Index r = 0; r < 6; ++r) CHECK(y.row(r) == bn.beta);
}

TEST_CASE("batch norm running statistics") {
  BatchNorm bn(2, 0.9, 1e-5);
  Tensor2 x(4, 2);
  x << 1, 10, 2, 10, 3, 10, 4, 10;
  bn.Forward(x, true);
  // running = 0.9 * init + 0.1 * batch.
  CHECK(bn.running_mean(0, 0) == Approx(0.1 * 2.5));
  CHECK(bn.running_var(0, 0) == Approx(0.9 * 1.0 + 0.1 * 1.25));
  const Tensor2 y = bn.Forward(x, false);
  CHECK(y(0, 0) == Approx((1.0 - 0.25) / std::sqrt(0.9 + 0.125 + 1e-5)));
}

TEST_CASE("batch norm gradients, full and masked batches") {
  Rng rng(6);
  for (bool masked : {false, true}) {
    BatchNorm bn(4);
    bn.gamma = RandomTensor(rng, 1, 4, 0.5, 1.5);
    bn.beta = RandomTensor(rng, 1, 4);
    Tensor2 x = RandomTensor(rng, 8, 4, -2.0, 2.0);
    Tensor2 r = RandomTensor(rng, 8, 4);
    std::vector<std::uint8_t> valid(8, 1);
    if (masked) {
      valid[6] = valid[7] = 0;
      r.row(6).setZero();
      r.row(7).setZero();
    }
    const auto* mask = masked ? &valid : nullptr;
    bn.Forward(x, true, mask);
    Tensor2 dx = bn.Backward(r);
    std::vector<ParamRef> params;
    bn.CollectParams("bn", params);
    params.push_back({"x", &x, &dx});
    const auto res = FiniteDiffCheck([&] { return Project(bn.Forward(x, true, mask), r); }, params);
    CHECK(res.max_rel_error < kGradTolerance);
  }
}

TEST_CASE("mse loss") {
  Rng rng(7);
  const Tensor2 t = RandomTensor(rng, 5, 3);
  CHECK(MseLoss(t, t).loss == 0.0);
  CHECK(MseLoss((t.array() + 1.0).matrix(), t).loss == Approx(1.0));
  Tensor2 p = RandomTensor(rng, 5, 3);
  auto res = MseLoss(p, t);
  Tensor2 g = res.grad;
  std::vector<ParamRef> params = {{"pred", &p, &g}};
  CHECK(FiniteDiffCheck([&] { return MseLoss(p, t).loss; }, params).max_rel_error < 1e-6);
  std::vector<std::uint8_t> valid = {1, 0, 1, 1, 0};
  Tensor2 off = t;
  off.row(1).setConstant(100.0);
  CHECK(MseLoss(off, t, &valid).loss == 0.0);
  CHECK(ThrownCode([&] { MseLoss(p, Tensor2::Zero(5, 2)); }) == Errc::kShapeMismatch);
}

TEST_CASE("lstm with zero weights outputs zero") {
  LstmLayer l(3, 4);
  l.weight.setZero();
  l.recurrent.setZero();
  l.bias.setZero();
  Rng rng(8);
  const std::vector<int> len = {5};
  CHECK(l.Forward(RandomTensor(rng, 5, 3), len).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lstm BPTT gradients") {
  Rng rng(9);
  for (Activation cell : {Activation::kTanh, Activation::kSigmoid}) {
    LstmLayer l(3, 4, cell);
    l.Init(rng);
    l.bias = RandomTensor(rng, 1, 16, -0.5, 0.5);
    const std::vector<int> lengths = {5, 3};
    const int steps = 5;
    Tensor2 x = RandomTensor(rng, steps * 2, 3, -1.5, 1.5);
    Tensor2 r = RandomTensor(rng, steps * 2, 4);
    const auto valid = ValidRows(steps, lengths);
    for (int i = 0; i < steps * 2; ++i) {
      if (!valid[i]) {
        r.row(i).setZero();
      }
    }
    l.Forward(x, lengths);
    Tensor2 dx = l.Backward(r);
    std::vector<ParamRef> params;
    l.CollectParams("lstm", params);
    params.push_back({"x", &x, &dx});
    const auto res = FiniteDiffCheck([&] { return Project(l.Forward(x, lengths), r); }, params);
    CHECK(res.max_rel_error < kGradTolerance);
    for (int i = 0; i < steps * 2; ++i) {
      if (!valid[i]) CHECK(dx.row(i).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("lstm forget bias starts at one") {
  Rng rng(10);
  LstmLayer l(3, 4);
  l.Init(rng);
  CHECK(l.bias.block(0, 4, 1, 4).isOnes());
  CHECK(l.bias.block(0, 0, 1, 4).isZero());
  // Glorot bound per gate block.
  const double limit = std::sqrt(6.0 / (3 + 4));
  CHECK(l.weight.cwiseAbs().maxCoeff() <= limit);
}

TEST_CASE("full models: gradients through every layer") {
  Rng rng(11);
  SECTION("mlp") {
    MlpNet net(ArchSpec::Parse("mlp:28-5-5-2"));
    net.Init(rng);
    REQUIRE(net.context() == 3);
    const Tensor2 x = RandomTensor(rng, 6, 28);
    const Tensor2 t = RandomTensor(rng, 6, 2, 0.0, 1.0);
    net.Backward(MseLoss(net.Forward(x, false), t).grad);
    const auto params = net.Params();
    const auto res = FiniteDiffCheck([&] { return MseLoss(net.Forward(x, false), t).loss; }, params);
    CHECK(res.max_rel_error < kGradTolerance);
  }
  SECTION("lstm") {
    LstmNet net(ArchSpec::Parse("lstm:6-5-5-3"));
    net.Init(rng);
    const std::vector<int> lengths = {4, 2, 3};
    const Tensor2 x = RandomTensor(rng, 4 * 3, 6, -2.0, 2.0);
    const Tensor2 t = RandomTensor(rng, 4 * 3, 3, 0.0, 1.0);
    const auto valid = ValidRows(4, lengths);
    net.Backward(MseLoss(net.Forward(x, lengths, true), t, &valid).grad);
    const auto params = net.Params();
    const auto res = FiniteDiffCheck(
        [&] { return MseLoss(net.Forward(x, lengths, true), t, &valid).loss; }, params);
    CHECK(res.max_rel_error < kGradTolerance);
  }
}

TEST_CASE("padding does not change lstm gradients") {
  Rng rng(12);
  LstmNet net(ArchSpec::Parse("lstm:6-5-5-3"));
  net.Init(rng);
  const Tensor2 x = RandomTensor(rng, 5, 6);
  const Tensor2 t = RandomTensor(rng, 5, 3, 0.0, 1.0);
  const std::vector<int> len = {5};

  net.Backward(MseLoss(net.Forward(x, len, true), t).grad);
  std::vector<Tensor2> reference;
  for (const auto& p : net.Params()) reference.push_back(*p.grad);

  Tensor2 xp = Tensor2::Zero(105, 6);
  Tensor2 tp = Tensor2::Zero(105, 3);
  xp.topRows(5) = x;
  tp.topRows(5) = t;
  xp.bottomRows(100) = RandomTensor(rng, 100, 6, -5.0, 5.0);
  const auto valid = ValidRows(105, len);
  net.Backward(MseLoss(net.Forward(xp, len, true), tp, &valid).grad);
  const auto params = net.Params();
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, (*params[i].grad - reference[i]).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("masks stay in (0, 1)") {
  Rng rng(13);
  MlpNet mlp(ArchSpec::Parse("mlp:28-8-8-8-2"));
  mlp.Init(rng);
  const Tensor2 m = mlp.Predict(RandomTensor(rng, 20, 4, -50.0, 50.0));
  CHECK(m.minCoeff() > 0.0);
  CHECK(m.maxCoeff() < 1.0);
  LstmNet lstm(ArchSpec::Parse("lstm:4-6-6-2"));
  lstm.Init(rng);
  const Tensor2 l = lstm.Predict(RandomTensor(rng, 20, 4, -50.0, 50.0));
  CHECK(l.minCoeff() > 0.0);
  CHECK(l.maxCoeff() < 1.0);
}

TEST_CASE("adam") {
  SECTION("zero gradient leaves parameters unchanged") {
    Tensor2 p(1, 2), g = Tensor2::Zero(1, 2);
    p << 1.5, -2.0;
    const Tensor2 before = p;
    Adam adam;
    std::vector<ParamRef> params = {{"p", &p, &g}};
    adam.Step(params);
    CHECK(p == before);
  }
  SECTION("first step moves each coordinate by about lr") {
    Tensor2 p(1, 3), g(1, 3);
    p << 0.0, 0.0, 0.0;
    g << 3.0, -0.01, 250.0;
    Adam adam(AdamConfig{.lr = 0.01});
    std::vector<ParamRef> params = {{"p", &p, &g}};
    adam.Step(params);
    CHECK(p(0, 0) == Approx(-0.01).epsilon(1e-6));
    CHECK(p(0, 1) == Approx(0.01).epsilon(1e-5));
    CHECK(p(0, 2) == Approx(-0.01).epsilon(1e-6));
  }
  SECTION("convex quadratic") {
    Tensor2 p(1, 2), g(1, 2);
    p << 5.0, -3.0;
    Adam adam(AdamConfig{.lr = 0.1});
    std::vector<ParamRef> params = {{"p", &p, &g}};
    int steps = 0;
    while (p.norm() >= 1e-3 && steps < 2000) {
      g = 2.0 * p;
      adam.Step(params);
      ++steps;
    }
    CHECK(p.norm() < 1e-3);
    CHECK(adam.step_count() == steps);
  }
  SECTION("gradient clipping") {
    Tensor2 p = Tensor2::Zero(1, 2), g(1, 2);
    g << 3.0, 4.0;
    std::vector<ParamRef> params = {{"p", &p, &g}};
    CHECK(ClipGradNorm(params, 1.0) == Approx(5.0));
    CHECK(g.norm() == Approx(1.0));
  }
}

TEST_CASE("architecture descriptors") {
  const ArchSpec a = ArchSpec::Parse("mlp:896-1024-1024-1024-64");
  CHECK(a.kind == ArchKind::kMlp);
  CHECK(a.ToString() == "mlp:896-1024-1024-1024-64");
  CHECK(ArchSpec::Lstm(128, 512, 2, 64).ToString() == "lstm:128-512-512-64");
  CHECK(ArchSpec::Mlp(896, 128, 3, 64).input_dim() == 896);
  for (const char* bad : {"mlp", "cnn:1-2", "mlp:12", "mlp:1--2", "lstm:4-x-2", "mlp:-3-2"}) {
    CHECK(ThrownCode([&] { ArchSpec::Parse(bad); }) == Errc::kCheckpointCorrupt);
  }
}

TEST_CASE("full-size models build and take one step") {
  Rng rng(14);
  {
    MlpNet net(ArchSpec::Parse("mlp:896-1024-1024-1024-64"));
    net.Init(rng);
    const Tensor2 x = RandomTensor(rng, 32, 896);
    const Tensor2 t = RandomTensor(rng, 32, 64, 0.0, 1.0);
    Adam adam;
    const auto params = net.Params();
    const double before = MseLoss(net.Forward(x, false), t).loss;
    for (int i = 0; i < 3; ++i) {
      net.Backward(MseLoss(net.Forward(x, true, 1.0, &rng), t).grad);
      adam.Step(params);
    }
    CHECK(MseLoss(net.Forward(x, false), t).loss < before);
  }
  {
    LstmNet net(ArchSpec::Parse("lstm:128-512-512-64"));
    net.Init(rng);
    const std::vector<int> lengths = {6, 4};
    const Tensor2 x = RandomTensor(rng, 12, 128);
    const Tensor2 t = RandomTensor(rng, 12, 64, 0.0, 1.0);
    const auto valid = ValidRows(6, lengths);
    net.Backward(MseLoss(net.Forward(x, lengths, true), t, &valid).grad);
    Adam adam;
    CHECK_NOTHROW(adam.Step(net.Params()));
    CHECK(net.Predict(x.topRows(6)).allFinite());
  }
}

TEST_CASE("checkpoint round trip") {
  Rng rng(15);
  auto model = CreateModel(ArchSpec::Parse("lstm:8-6-6-4"), rng);
  model->QuantizeToFloat();
  NormStats stats;
  stats.mean = Vector::LinSpaced(8, -1.0, 1.0);
  stats.std = Vector::Constant(8, 0.5);
  const Checkpoint ckpt = MakeCheckpoint(*model, "carfac;agc_loop_gain=2", stats);
  const std::string bytes = SerializeCheckpoint(ckpt);
  CHECK(bytes.substr(0, 4) == "EARS");
  const Checkpoint back = ParseCheckpoint(bytes);
  CHECK(back.arch == "lstm:8-6-6-4");
  CHECK(back.frontend == "carfac;agc_loop_gain=2");
  CHECK(back.stats.mean == stats.mean.cast<float>().cast<double>());
  CHECK(SerializeCheckpoint(back) == bytes);

  auto restored = RestoreModel(back);
  const Tensor2 x = RandomTensor(rng, 7, 8);
  CHECK(restored->Predict(x) == model->Predict(x));

  testing::TempDir dir("ckpt");
  SaveCheckpoint(dir / "m.ckpt", ckpt);
  CHECK(SerializeCheckpoint(LoadCheckpoint(dir / "m.ckpt")) == bytes);
}

TEST_CASE("corrupt checkpoints are rejected") {
  Rng rng(16);
  auto model = CreateModel(ArchSpec::Parse("mlp:28-5-2"), rng);
  NormStats stats{Vector::Zero(4), Vector::Ones(4)};
  const std::string bytes = SerializeCheckpoint(MakeCheckpoint(*model, "gt", stats));

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(ThrownCode([&] { ParseCheckpoint(bad_magic); }) == Errc::kCheckpointCorrupt);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  CHECK(ThrownCode([&] { ParseCheckpoint(bad_version); }) == Errc::kCheckpointCorrupt);
  CHECK(ThrownCode([&] { ParseCheckpoint(bytes.substr(0, bytes.size() - 3)); }) == Errc::kCheckpointCorrupt);
  CHECK(ThrownCode([&] { ParseCheckpoint(""); }) == Errc::kCheckpointCorrupt);

  Checkpoint missing = ParseCheckpoint(bytes);
  missing.tensors.pop_back();
  CHECK(ThrownCode([&] { RestoreModel(missing); }) == Errc::kCheckpointCorrupt);
  Checkpoint wrong_stats = ParseCheckpoint(bytes);
  wrong_stats.stats = NormStats{Vector::Zero(3), Vector::Ones(3)};
  CHECK(ThrownCode([&] { RestoreModel(wrong_stats); }) == Errc::kCheckpointCorrupt);
  CHECK(ThrownCode([] { LoadCheckpoint("/nonexistent/x.ckpt"); }) == Errc::kIoError);
}

}  // namespace
}  // namespace ears::nnet
