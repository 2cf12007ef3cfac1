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

#ifndef EARS_EVALUATION_HPP_
#define EARS_EVALUATION_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "ears/metrics.hpp"
#include "ears/mixer.hpp"
#include "ears/nnet/checkpoint.hpp"

namespace ears {

struct FileScore {
  ReportContext context;
  DeltaReport report;
};

// Enhances every mixture of a manifest with the checkpoint and scores it.
// `jobs` threads each own a model copy; results keep manifest order. When
// `enhanced_dir` is set the enhanced signals are written there too.
std::vector<FileScore> EvaluateManifest(const std::vector<MixtureSpec>& specs,
                                        const nnet::Checkpoint& ckpt, int jobs = 1,
                                        const std::filesystem::path& enhanced_dir = {});

struct ConditionSummary {
  std::string noise_type;
  double snr_db = 0.0;
  std::string frontend;
  std::string arch;
  int files = 0;
  DeltaReport mean;
};

ConditionSummary Summarize(const std::vector<FileScore>& scores, double snr_db);

std::string SummaryCsvHeader();
std::string SummaryCsvRow(const ConditionSummary& s);

std::string EnhancedFileName(const MixtureSpec& spec);

}  // namespace ears

#endif  // EARS_EVALUATION_HPP_
