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

#ifndef EARS_TRAINER_HPP_
#define EARS_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ears/config.hpp"
#include "ears/features.hpp"
#include "ears/frontends/frontend.hpp"
#include "ears/mixer.hpp"
#include "ears/nnet/checkpoint.hpp"
#include "ears/nnet/models.hpp"

namespace ears {

inline constexpr int kMaxSequenceFrames = 500;

struct TrainConfig {
  nnet::ArchKind arch = nnet::ArchKind::kMlp;
  std::string frontend = "gt";
  double lr = 0.001;
  int epochs = 20;
  int batch_size = 1024;  // frames (mlp) or recordings (lstm)
  double keep_prob = 0.9;
  int hidden = 128;
  std::uint64_t seed = 0;
  double clip_norm = 0.0;  // 0 disables clipping
  std::filesystem::path train_manifest;
  std::filesystem::path valid_manifest;
  std::filesystem::path out;
  std::filesystem::path cache_dir;  // optional feature cache
  int jobs = 1;                     // feature extraction threads

  static TrainConfig Defaults(nnet::ArchKind arch);
  // Missing keys take the per-architecture defaults. The seed key is left to
  // the caller when absent.
  static TrainConfig FromConfig(const KeyValueConfig& cfg);

  nnet::ArchSpec Spec() const;
};

// One utterance: unnormalized base features (F x 128) and the IRM target
// (F x 64, frames as rows).
struct Example {
  Matrix features;
  Matrix target;
};

Example MakeExample(const LoadedMixture& m, const FrontendConfig& frontend);

// Loads the mixtures of a manifest and extracts features with `jobs` threads.
// Results are ordered as the manifest. With a cache directory, per-utterance
// feature files are read when present and written otherwise.
std::vector<Example> LoadExamples(const std::vector<MixtureSpec>& specs,
                                  const FrontendConfig& frontend, int jobs = 1,
                                  const std::filesystem::path& cache_dir = {});

// Feature cache file for one manifest line, named by a hash of the line and
// the front-end tag.
std::filesystem::path CachePath(const std::filesystem::path& dir, const MixtureSpec& spec,
                                const FrontendConfig& frontend);
void SaveExample(const std::filesystem::path& path, const Example& ex,
                 const std::string& frontend_tag);
Example LoadExample(const std::filesystem::path& path);

struct EpochStats {
  int epoch = 0;  // 0 is the untrained model
  double train_loss = 0.0;
  double valid_loss = 0.0;
};

struct TrainHooks {
  std::function<void(int epoch, int batch, double loss)> on_batch;
  // Called after validation with the epoch's (float-rounded) checkpoint.
  std::function<void(const EpochStats&, const nnet::Checkpoint&)> on_epoch;
};

struct TrainResult {
  nnet::Checkpoint best;
  int best_epoch = 0;
  std::vector<EpochStats> history;
};

// Mean squared mask error of a model over a set of examples.
double EvaluateLoss(nnet::MaskEstimator& model, const NormStats& stats,
                    const std::vector<Example>& examples);

TrainResult Train(const TrainConfig& config, const std::vector<Example>& train,
                  const std::vector<Example>& valid, const TrainHooks& hooks = {});

// Reads both manifests, trains, writes the best checkpoint to config.out and
// the loss log to config.out + ".log".
TrainResult RunTraining(const TrainConfig& config, const TrainHooks& hooks = {});

std::string FormatLog(const std::vector<EpochStats>& history);

}  // namespace ears

#endif  // EARS_TRAINER_HPP_
