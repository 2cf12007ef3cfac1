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

#include "ears/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ears/error.hpp"
#include "ears/nnet/adam.hpp"
#include "ears/parallel.hpp"
#include "ears/rng.hpp"

namespace ears {
namespace {

namespace fs = std::filesystem;
using nnet::ArchKind;
using nnet::Tensor2;

void RoundToFloat(Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
  }
}

void RoundToFloat(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(static_cast<float>(v[i]));
  }
}

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::size_t> Shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  return order;
}

void CheckFinite(double loss, int epoch, int batch) {
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite training loss at epoch " << epoch << ", batch " << batch;
    throw Error(Errc::kNonFiniteLoss, msg.str());
  }
}

struct Sequence {
  Matrix x;
  Matrix y;
};

std::vector<Sequence> Chunk(const std::vector<Example>& examples, const NormStats& stats) {
  std::vector<Sequence> out;
  for (const auto& ex : examples) {
    const Matrix x = Normalize(ex.features, stats);
    for (Eigen::Index start = 0; start < x.rows(); start += kMaxSequenceFrames) {
      const Eigen::Index len = std::min<Eigen::Index>(kMaxSequenceFrames, x.rows() - start);
      out.push_back({x.middleRows(start, len), ex.target.middleRows(start, len)});
    }
  }
  return out;
}

}  // namespace

TrainConfig TrainConfig::Defaults(ArchKind arch) {
  TrainConfig c;
  c.arch = arch;
  if (arch == ArchKind::kLstm) {
    c.lr = 1e-4;
    c.epochs = 200;
    c.batch_size = 16;
    c.keep_prob = 1.0;
    c.hidden = 64;
  }
  return c;
}

TrainConfig TrainConfig::FromConfig(const KeyValueConfig& cfg) {
  cfg.RequireKnownKeys({"arch", "frontend", "lr", "epochs", "batch_size", "keep_prob", "hidden",
                        "seed", "train_manifest", "valid_manifest", "out", "clip_norm",
                        "cache_dir", "jobs"});
  const std::string arch = cfg.GetString("arch", "mlp");
  ArchKind kind;
  if (arch == "mlp") {
    kind = ArchKind::kMlp;
  } else if (arch == "lstm") {
    kind = ArchKind::kLstm;
  } else {
    throw Error(Errc::kConfig, "arch must be mlp or lstm, got '" + arch + "'");
  }
  TrainConfig c = Defaults(kind);
  c.frontend = FrontendConfig::FromTag(cfg.GetString("frontend", c.frontend)).Tag();
  c.lr = cfg.GetDouble("lr", c.lr);
  c.epochs = static_cast<int>(cfg.GetInt("epochs", c.epochs));
  c.batch_size = static_cast<int>(cfg.GetInt("batch_size", c.batch_size));
  c.keep_prob = cfg.GetDouble("keep_prob", c.keep_prob);
  c.hidden = static_cast<int>(cfg.GetInt("hidden", c.hidden));
  c.seed = cfg.GetU64("seed", c.seed);
  c.clip_norm = cfg.GetDouble("clip_norm", c.clip_norm);
  c.train_manifest = cfg.GetString("train_manifest", "");
  c.valid_manifest = cfg.GetString("valid_manifest", "");
  c.out = cfg.GetString("out", "");
  c.cache_dir = cfg.GetString("cache_dir", "");
  c.jobs = static_cast<int>(cfg.GetInt("jobs", c.jobs));
  if (!(c.lr > 0.0)) throw Error(Errc::kConfig, "lr must be positive");
  if (c.epochs < 1) throw Error(Errc::kConfig, "epochs must be >= 1");
  if (c.batch_size < 1) throw Error(Errc::kConfig, "batch_size must be >= 1");
  if (!(c.keep_prob > 0.0 && c.keep_prob <= 1.0)) throw Error(Errc::kConfig, "keep_prob must be in (0, 1]");
  if (c.hidden < 1) throw Error(Errc::kConfig, "hidden must be >= 1");
  if (c.clip_norm < 0.0) throw Error(Errc::kConfig, "clip_norm must be >= 0");
  if (c.jobs < 1) throw Error(Errc::kConfig, "jobs must be >= 1");
  return c;
}

nnet::ArchSpec TrainConfig::Spec() const {
  constexpr int kFeatureDim = 2 * kDefaultChannels;
  if (arch == ArchKind::kMlp) {
    return nnet::ArchSpec::Mlp(kFeatureDim * (2 * kContextFrames + 1), hidden, 3, kDefaultChannels);
  }
  return nnet::ArchSpec::Lstm(kFeatureDim, hidden, 2, kDefaultChannels);
}

Example MakeExample(const LoadedMixture& m, const FrontendConfig& frontend) {
  Example ex;
  ex.features = BaseFeatures(FrontendSpectrogram(m.mix.noisy, frontend));
  const Mask irm = ComputeIrm(GammatoneSpectrogram(m.clean), GammatoneSpectrogram(m.mix.noise));
  ex.target = irm.values.transpose();
  if (ex.features.rows() != ex.target.rows()) {
    throw Error(Errc::kShapeMismatch, "feature and target frame counts differ");
  }
  // Cached and freshly computed examples must agree exactly.
  RoundToFloat(ex.features);
  RoundToFloat(ex.target);
  return ex;
}

fs::path CachePath(const fs::path& dir, const MixtureSpec& spec, const FrontendConfig& frontend) {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.feat",
                static_cast<unsigned long long>(Fnv1a(ToJsonLine(spec) + "|" + frontend.Tag())));
  return dir / name;
}

void SaveExample(const fs::path& path, const Example& ex, const std::string& frontend_tag) {
  nnet::Checkpoint c;
  c.arch = "features";
  c.frontend = frontend_tag;
  c.tensors.push_back(nnet::ToNamedTensor("features", ex.features));
  c.tensors.push_back(nnet::ToNamedTensor("irm", ex.target));
  nnet::SaveCheckpoint(path, c);
}

Example LoadExample(const fs::path& path) {
  const nnet::Checkpoint c = nnet::LoadCheckpoint(path);
  const auto* f = c.Find("features");
  const auto* t = c.Find("irm");
  if (c.arch != "features" || f == nullptr || t == nullptr) {
    throw Error(Errc::kCheckpointCorrupt, "not a feature cache file: " + path.string());
  }
  return {nnet::FromNamedTensor(*f), nnet::FromNamedTensor(*t)};
}

std::vector<Example> LoadExamples(const std::vector<MixtureSpec>& specs,
                                  const FrontendConfig& frontend, int jobs,
                                  const fs::path& cache_dir) {
  std::vector<Example> out(specs.size());
  if (!cache_dir.empty()) fs::create_directories(cache_dir);
  const auto one = [&](std::size_t i) {
    if (!cache_dir.empty()) {
      const fs::path p = CachePath(cache_dir, specs[i], frontend);
      if (fs::exists(p)) {
        out[i] = LoadExample(p);
        return;
      }
      out[i] = MakeExample(RealizeMixture(specs[i]), frontend);
      SaveExample(p, out[i], frontend.Tag());
      return;
    }
    out[i] = MakeExample(RealizeMixture(specs[i]), frontend);
  };

  ParallelFor(specs.size(), jobs, [&](std::size_t i, int) { one(i); });
  return out;
}

double EvaluateLoss(nnet::MaskEstimator& model, const NormStats& stats,
                    const std::vector<Example>& examples) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& ex : examples) {
    if (ex.features.rows() == 0) continue;
    const Tensor2 pred = model.Predict(Normalize(ex.features, stats));
    sum += (pred - ex.target).squaredNorm();
    count += static_cast<double>(ex.target.size());
  }
  return count > 0.0 ? sum / count : 0.0;
}

TrainResult Train(const TrainConfig& config, const std::vector<Example>& train,
                  const std::vector<Example>& valid, const TrainHooks& hooks) {
  if (train.empty()) throw Error(Errc::kEmptyManifest, "training set is empty");
  if (valid.empty()) throw Error(Errc::kEmptyManifest, "validation set is empty");
  const std::string tag = FrontendConfig::FromTag(config.frontend).Tag();
  const nnet::ArchSpec spec = config.Spec();

  std::vector<Matrix> base;
  base.reserve(train.size());
  for (const auto& ex : train) base.push_back(ex.features);
  NormStats stats = ComputeStats(base);
  RoundToFloat(stats.mean);
  RoundToFloat(stats.std);
  base.clear();

  Rng init_rng(DeriveSeed(config.seed, "init", 0));
  Rng drop_rng(DeriveSeed(config.seed, "dropout", 0));
  std::unique_ptr<nnet::MaskEstimator> model = nnet::CreateModel(spec, init_rng);
  model->QuantizeToFloat();
  auto* mlp = dynamic_cast<nnet::MlpNet*>(model.get());
  auto* lstm = dynamic_cast<nnet::LstmNet*>(model.get());
  const std::vector<nnet::ParamRef> params = model->Params();
  nnet::Adam adam(nnet::AdamConfig{.lr = config.lr});

  TrainResult result;
  double best_valid = 0.0;
  const auto finish_epoch = [&](int epoch, double train_loss) {
    EpochStats st{epoch, train_loss, EvaluateLoss(*model, stats, valid)};
    result.history.push_back(st);
    const nnet::Checkpoint ckpt = nnet::MakeCheckpoint(*model, tag, stats);
    if (epoch == 0 || st.valid_loss < best_valid) {
      best_valid = st.valid_loss;
      result.best = ckpt;
      result.best_epoch = epoch;
    }
    if (hooks.on_epoch) hooks.on_epoch(st, ckpt);
  };
  finish_epoch(0, EvaluateLoss(*model, stats, train));

  const auto update = [&](double loss, int epoch, int batch) {
    CheckFinite(loss, epoch, batch);
    if (config.clip_norm > 0.0) nnet::ClipGradNorm(params, config.clip_norm);
    adam.Step(params);
    if (hooks.on_batch) hooks.on_batch(epoch, batch, loss);
  };

  if (mlp != nullptr) {
    const int k = mlp->context();
    Eigen::Index total = 0;
    for (const auto& ex : train) total += ex.features.rows();
    Matrix x(total, spec.input_dim());
    Matrix y(total, spec.output_dim());
    Eigen::Index row = 0;
    for (const auto& ex : train) {
      const Eigen::Index n = ex.features.rows();
      if (n == 0) continue;
      x.middleRows(row, n) = ContextExpand(Normalize(ex.features, stats), k);
      y.middleRows(row, n) = ex.target;
      row += n;
    }
    const auto batch = static_cast<std::size_t>(config.batch_size);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      const auto order = Shuffled(static_cast<std::size_t>(total), DeriveSeed(config.seed, "shuffle", epoch));
      double loss_sum = 0.0;
      int b = 0;
      for (std::size_t start = 0; start < order.size(); start += batch, ++b) {
        const std::size_t n = std::min(batch, order.size() - start);
        Matrix xb(static_cast<Eigen::Index>(n), x.cols());
        Matrix yb(static_cast<Eigen::Index>(n), y.cols());
        for (std::size_t i = 0; i < n; ++i) {
          xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(order[start + i]));
          yb.row(static_cast<Eigen::Index>(i)) = y.row(static_cast<Eigen::Index>(order[start + i]));
        }
        const Tensor2 pred = mlp->Forward(xb, true, config.keep_prob, &drop_rng);
        const nnet::LossResult loss = nnet::MseLoss(pred, yb);
        mlp->Backward(loss.grad);
        update(loss.loss, epoch, b);
        loss_sum += loss.loss * static_cast<double>(n);
      }
      model->QuantizeToFloat();
      finish_epoch(epoch, total > 0 ? loss_sum / static_cast<double>(total) : 0.0);
    }
  } else {
    const std::vector<Sequence> seqs = Chunk(train, stats);
    const auto batch = static_cast<std::size_t>(config.batch_size);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      const auto order = Shuffled(seqs.size(), DeriveSeed(config.seed, "shuffle", epoch));
      double loss_sum = 0.0;
      double rows_sum = 0.0;
      int b = 0;
      for (std::size_t start = 0; start < order.size(); start += batch, ++b) {
        const std::size_t n = std::min(batch, order.size() - start);
        std::vector<int> lengths(n);
        int steps = 0;
        for (std::size_t i = 0; i < n; ++i) {
          lengths[i] = static_cast<int>(seqs[order[start + i]].x.rows());
          steps = std::max(steps, lengths[i]);
        }
        if (steps == 0) continue;
        const auto bn = static_cast<Eigen::Index>(n);
        Matrix xb = Matrix::Zero(steps * bn, spec.input_dim());
        Matrix yb = Matrix::Zero(steps * bn, spec.output_dim());
        for (std::size_t i = 0; i < n; ++i) {
          const Sequence& s = seqs[order[start + i]];
          for (Eigen::Index t = 0; t < s.x.rows(); ++t) {
            xb.row(t * bn + static_cast<Eigen::Index>(i)) = s.x.row(t);
            yb.row(t * bn + static_cast<Eigen::Index>(i)) = s.y.row(t);
          }
        }
        const auto valid_rows = nnet::ValidRows(steps, lengths);
        const Tensor2 pred = lstm->Forward(xb, lengths, true, config.keep_prob, &drop_rng);
        const nnet::LossResult loss = nnet::MseLoss(pred, yb, &valid_rows);
        lstm->Backward(loss.grad);
        update(loss.loss, epoch, b);
        const double rows = std::accumulate(lengths.begin(), lengths.end(), 0.0);
        loss_sum += loss.loss * rows;
        rows_sum += rows;
      }
      model->QuantizeToFloat();
      finish_epoch(epoch, rows_sum > 0.0 ? loss_sum / rows_sum : 0.0);
    }
  }
  return result;
}

std::string FormatLog(const std::vector<EpochStats>& history) {
  std::string out;
  char line[96];
  for (const auto& e : history) {
    std::snprintf(line, sizeof(line), "%d %.9g %.9g\n", e.epoch, e.train_loss, e.valid_loss);
    out += line;
  }
  return out;
}

TrainResult RunTraining(const TrainConfig& config, const TrainHooks& hooks) {
  if (config.train_manifest.empty() || config.valid_manifest.empty()) {
    throw Error(Errc::kConfig, "train_manifest and valid_manifest are required");
  }
  if (config.out.empty()) throw Error(Errc::kConfig, "out is required");
  const auto train_specs = ReadManifest(config.train_manifest);
  const auto valid_specs = ReadManifest(config.valid_manifest);
  if (train_specs.empty()) throw Error(Errc::kEmptyManifest, "empty " + config.train_manifest.string());
  if (valid_specs.empty()) throw Error(Errc::kEmptyManifest, "empty " + config.valid_manifest.string());
  const FrontendConfig frontend = FrontendConfig::FromTag(config.frontend);
  const auto train = LoadExamples(train_specs, frontend, config.jobs, config.cache_dir);
  const auto valid = LoadExamples(valid_specs, frontend, config.jobs, config.cache_dir);

  TrainResult result = Train(config, train, valid, hooks);
  if (config.out.has_parent_path()) fs::create_directories(config.out.parent_path());
  nnet::SaveCheckpoint(config.out, result.best);
  std::ofstream log(config.out.string() + ".log", std::ios::binary | std::ios::trunc);
  log << FormatLog(result.history);
  if (!log) throw Error(Errc::kIoError, "cannot write training log");
  return result;
}

}  // namespace ears
