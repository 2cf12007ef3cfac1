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

#ifndef EARS_MIXER_HPP_
#define EARS_MIXER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ears/config.hpp"
#include "ears/waveform.hpp"

namespace ears {

enum class Split { kTrain, kValid, kTest };

std::string SplitName(Split split);
Split ParseSplit(const std::string& name);

struct MixtureSpec {
  std::string clean_path;
  std::string noise_path;
  double snr_db = 0.0;
  std::uint64_t noise_offset = 0;
  std::uint64_t seed = 0;
  Split split = Split::kTrain;
};

// One JSON object per line, fields named as in MixtureSpec.
std::string ToJsonLine(const MixtureSpec& spec);
MixtureSpec FromJsonLine(const std::string& line);
std::vector<MixtureSpec> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const std::vector<MixtureSpec>& specs);

struct Mixture {
  Waveform noisy;
  Waveform noise;  // scaled; noisy = clean + noise
};

// Takes the noise from `offset` (looping) and scales it so the full-utterance
// power ratio is `snr_db`. Throws Errc::kSilentInput below 1e-8 RMS.
Mixture MixAtSnr(const Waveform& clean, const Waveform& noise, double snr_db,
                 std::uint64_t offset);

struct LoadedMixture {
  Waveform clean;
  Mixture mix;
};

// Reads the two files (16 kHz enforced) and mixes them as specified.
LoadedMixture RealizeMixture(const MixtureSpec& spec);

struct CorpusConfig {
  std::filesystem::path clean_dir;
  // Optional; when empty the validation or test lines reuse clean_dir.
  std::filesystem::path valid_clean_dir;
  std::filesystem::path test_clean_dir;
  std::vector<std::filesystem::path> train_noises;
  std::vector<std::filesystem::path> test_noises;
  double train_snr_min = 6.0;
  double train_snr_max = 12.0;
  double valid_snr = 3.0;
  std::vector<double> test_snrs = {-3.0, 3.0, 9.0};
  // Utterances longer than this are dropped (0 keeps everything).
  double max_duration_s = 0.0;
  std::uint64_t seed = 0;

  // Keys: clean_dir, valid_clean_dir, test_clean_dir, train_noises,
  // test_noises (comma lists), train_snr_min, train_snr_max, valid_snr,
  // test_snrs, arch (lstm implies max_duration_s = 5), max_duration_s, seed.
  static CorpusConfig FromConfig(const KeyValueConfig& cfg);
};

struct ManifestFile {
  std::string name;  // e.g. train_babble.jsonl
  std::vector<MixtureSpec> specs;
};

// Per training noise: train_<noise> (SNR uniform in [min, max]) and
// valid_<noise> (fixed SNR); per test noise and SNR: test_<noise>_<snr>.
// Deterministic given the seed. Throws Errc::kEmptyCorpus.
std::vector<ManifestFile> BuildCorpus(const CorpusConfig& config);

// Writes every manifest into `out_dir`; returns the written paths.
std::vector<std::filesystem::path> WriteCorpus(const std::vector<ManifestFile>& manifests,
                                               const std::filesystem::path& out_dir);

// Sorted *.wav files of a directory.
std::vector<std::filesystem::path> ListWavs(const std::filesystem::path& dir);

std::string SnrLabel(double snr_db);

}  // namespace ears

#endif  // EARS_MIXER_HPP_
