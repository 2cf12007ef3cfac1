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

#include "ears/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

#include "ears/error.hpp"
#include "ears/parallel.hpp"
#include "ears/pipeline.hpp"
#include "ears/wav_io.hpp"

namespace ears {

namespace fs = std::filesystem;

std::string EnhancedFileName(const MixtureSpec& spec) {
  return fs::path(spec.clean_path).stem().string() + "_" + fs::path(spec.noise_path).stem().string() +
         "_" + SnrLabel(spec.snr_db) + ".wav";
}

std::vector<FileScore> EvaluateManifest(const std::vector<MixtureSpec>& specs,
                                        const nnet::Checkpoint& ckpt, int jobs,
                                        const fs::path& enhanced_dir) {
  std::vector<FileScore> out(specs.size());
  if (!enhanced_dir.empty()) fs::create_directories(enhanced_dir);
  const std::string arch = ckpt.arch;
  const std::string frontend = ckpt.frontend;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(specs.size())));
  // One model per worker; inference writes layer caches.
  std::vector<std::unique_ptr<Enhancer>> models;
  for (int w = 0; w < workers; ++w) models.push_back(std::make_unique<Enhancer>(ckpt));
  ParallelFor(specs.size(), workers, [&](std::size_t i, int worker) {
    const LoadedMixture m = RealizeMixture(specs[i]);
    const Waveform enhanced = models[static_cast<std::size_t>(worker)]->Run(m.mix.noisy);
    if (!enhanced_dir.empty()) WriteWav(enhanced_dir / EnhancedFileName(specs[i]), enhanced);
    FileScore& s = out[i];
    s.context.file = specs[i].clean_path;
    s.context.snr_condition = SnrLabel(specs[i].snr_db);
    s.context.noise_type = fs::path(specs[i].noise_path).stem().string();
    s.context.frontend = frontend;
    s.context.arch = arch;
    s.report = ComputeDeltaReport(m.clean, m.mix.noisy, enhanced);
  });
  return out;
}

ConditionSummary Summarize(const std::vector<FileScore>& scores, double snr_db) {
  ConditionSummary s;
  s.snr_db = snr_db;
  if (scores.empty()) return s;
  s.noise_type = scores.front().context.noise_type;
  s.frontend = scores.front().context.frontend;
  s.arch = scores.front().context.arch;
  s.files = static_cast<int>(scores.size());
  for (const auto& f : scores) {
    s.mean.segsnr_noisy += f.report.segsnr_noisy;
    s.mean.segsnr_enh += f.report.segsnr_enh;
    s.mean.cd_noisy += f.report.cd_noisy;
    s.mean.cd_enh += f.report.cd_enh;
    s.mean.delta_segsnr += f.report.delta_segsnr;
    s.mean.delta_cd += f.report.delta_cd;
  }
  const double n = static_cast<double>(scores.size());
  s.mean.segsnr_noisy /= n;
  s.mean.segsnr_enh /= n;
  s.mean.cd_noisy /= n;
  s.mean.cd_enh /= n;
  s.mean.delta_segsnr /= n;
  s.mean.delta_cd /= n;
  return s;
}

std::string SummaryCsvHeader() {
  return "noise_type,snr_db,frontend,arch,files,segsnr_noisy,segsnr_enh,delta_segsnr,cd_noisy,cd_enh,"
         "delta_cd\n";
}

std::string SummaryCsvRow(const ConditionSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), ",%g,", s.snr_db);
  std::string row = s.noise_type + buf + "\"" + s.frontend + "\"," + s.arch + ",";
  std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", s.files, s.mean.segsnr_noisy,
                s.mean.segsnr_enh, s.mean.delta_segsnr, s.mean.cd_noisy, s.mean.cd_enh,
                s.mean.delta_cd);
  return row + buf;
}

}  // namespace ears
