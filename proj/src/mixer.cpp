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

#include "ears/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ears/error.hpp"
#include "ears/rng.hpp"
#include "ears/wav_io.hpp"

namespace ears {
namespace {

namespace fs = std::filesystem;

constexpr double kSilentRms = 1e-8;

std::string CanonicalPath(const fs::path& p) {
  return fs::absolute(p).lexically_normal().string();
}

}  // namespace

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw Error(Errc::kMalformedFile, "unknown split '" + name + "'");
}

std::string ToJsonLine(const MixtureSpec& spec) {
  nlohmann::ordered_json j;
  j["clean_path"] = spec.clean_path;
  j["noise_path"] = spec.noise_path;
  j["snr_db"] = spec.snr_db;
  j["noise_offset"] = spec.noise_offset;
  j["seed"] = spec.seed;
  j["split"] = SplitName(spec.split);
  return j.dump();
}

MixtureSpec FromJsonLine(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    MixtureSpec spec;
    spec.clean_path = j.at("clean_path").get<std::string>();
    spec.noise_path = j.at("noise_path").get<std::string>();
    spec.snr_db = j.at("snr_db").get<double>();
    spec.noise_offset = j.at("noise_offset").get<std::uint64_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.split = ParseSplit(j.at("split").get<std::string>());
    if (!std::isfinite(spec.snr_db)) throw Error(Errc::kMalformedFile, "non-finite snr_db");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedFile, std::string("manifest line: ") + e.what());
  }
}

std::vector<MixtureSpec> ReadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open manifest " + path.string());
  std::vector<MixtureSpec> specs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    specs.push_back(FromJsonLine(line));
  }
  return specs;
}

void WriteManifest(const fs::path& path, const std::vector<MixtureSpec>& specs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot create " + path.string());
  for (const auto& s : specs) out << ToJsonLine(s) << '\n';
  if (!out) throw Error(Errc::kIoError, "write failed: " + path.string());
}

Mixture MixAtSnr(const Waveform& clean, const Waveform& noise, double snr_db,
                 std::uint64_t offset) {
  RequireRate(clean);
  RequireRate(noise);
  if (!std::isfinite(snr_db)) throw Error(Errc::kInvalidParams, "snr must be finite");
  if (noise.empty()) throw Error(Errc::kSilentInput, "empty noise");
  const double clean_rms = Rms(clean.samples);
  if (clean_rms < kSilentRms) throw Error(Errc::kSilentInput, "clean speech is silent");

  const std::size_t n = clean.size();
  std::vector<double> segment(n);
  const std::size_t len = noise.size();
  std::size_t pos = static_cast<std::size_t>(offset % len);
  for (std::size_t i = 0; i < n; ++i) {
    segment[i] = noise.samples[pos];
    if (++pos == len) pos = 0;
  }
  const double noise_rms = Rms(segment);
  if (noise_rms < kSilentRms) throw Error(Errc::kSilentInput, "noise segment is silent");
  const double alpha = clean_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));

  Mixture mix;
  mix.noise.samples = std::move(segment);
  mix.noisy.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mix.noise.samples[i] *= alpha;
    mix.noisy.samples[i] = clean.samples[i] + mix.noise.samples[i];
  }
  return mix;
}

LoadedMixture RealizeMixture(const MixtureSpec& spec) {
  LoadedMixture out;
  out.clean = ReadWav(spec.clean_path, kPipelineRate);
  const Waveform noise = ReadWav(spec.noise_path, kPipelineRate);
  out.mix = MixAtSnr(out.clean, noise, spec.snr_db, spec.noise_offset);
  return out;
}

CorpusConfig CorpusConfig::FromConfig(const KeyValueConfig& cfg) {
  cfg.RequireKnownKeys({"clean_dir", "valid_clean_dir", "test_clean_dir", "train_noises",
                        "test_noises", "train_snr_min", "train_snr_max", "valid_snr",
                        "test_snrs", "arch", "max_duration_s", "seed"});
  CorpusConfig c;
  c.clean_dir = cfg.GetString("clean_dir");
  c.valid_clean_dir = cfg.GetString("valid_clean_dir", "");
  c.test_clean_dir = cfg.GetString("test_clean_dir", "");
  for (const auto& p : cfg.GetList("train_noises")) c.train_noises.emplace_back(p);
  for (const auto& p : cfg.GetList("test_noises")) c.test_noises.emplace_back(p);
  c.train_snr_min = cfg.GetDouble("train_snr_min", c.train_snr_min);
  c.train_snr_max = cfg.GetDouble("train_snr_max", c.train_snr_max);
  c.valid_snr = cfg.GetDouble("valid_snr", c.valid_snr);
  if (cfg.Has("test_snrs")) {
    c.test_snrs.clear();
    for (const auto& s : cfg.GetList("test_snrs")) {
      KeyValueConfig one;
      one.Set("v", s);
      c.test_snrs.push_back(one.GetDouble("v"));
    }
  }
  const std::string arch = cfg.GetString("arch", "mlp");
  if (arch != "mlp" && arch != "lstm") throw Error(Errc::kConfig, "arch must be mlp or lstm");
  c.max_duration_s = cfg.GetDouble("max_duration_s", arch == "lstm" ? 5.0 : 0.0);
  c.seed = cfg.GetU64("seed", 0);
  if (!(c.train_snr_max >= c.train_snr_min)) {
    throw Error(Errc::kConfig, "train_snr_max must be >= train_snr_min");
  }
  return c;
}

std::vector<fs::path> ListWavs(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) throw Error(Errc::kIoError, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SnrLabel(double snr_db) {
  std::ostringstream s;
  s << snr_db << "dB";
  return s.str();
}

std::vector<ManifestFile> BuildCorpus(const CorpusConfig& config) {
  const auto load_clean = [&](const fs::path& dir) {
    std::vector<std::pair<std::string, std::size_t>> files;
    for (const auto& p : ListWavs(dir)) {
      const Waveform w = ReadWav(p, kPipelineRate);
      if (config.max_duration_s > 0.0 &&
          static_cast<double>(w.size()) > config.max_duration_s * kPipelineRate) {
        continue;
      }
      files.emplace_back(CanonicalPath(p), w.size());
    }
    return files;
  };
  const auto train_clean = load_clean(config.clean_dir);
  const auto valid_clean =
      config.valid_clean_dir.empty() ? train_clean : load_clean(config.valid_clean_dir);
  const auto test_clean =
      config.test_clean_dir.empty() ? train_clean : load_clean(config.test_clean_dir);
  if (train_clean.empty()) throw Error(Errc::kEmptyCorpus, "no clean utterances");
  if (config.train_noises.empty() && config.test_noises.empty()) {
    throw Error(Errc::kEmptyCorpus, "no noise files configured");
  }

  const auto make = [&](Split split, const fs::path& noise_path,
                        const std::vector<std::pair<std::string, std::size_t>>& clean,
                        const std::string& tag, auto snr_for) {
    const Waveform noise = ReadWav(noise_path, kPipelineRate);
    if (noise.empty()) throw Error(Errc::kEmptyCorpus, "empty noise " + noise_path.string());
    std::vector<MixtureSpec> specs;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      MixtureSpec s;
      s.clean_path = clean[i].first;
      s.noise_path = CanonicalPath(noise_path);
      s.seed = DeriveSeed(config.seed, tag, i);
      s.split = split;
      Rng rng(s.seed);
      s.snr_db = snr_for(rng);
      s.noise_offset = rng.Below(noise.size());
      specs.push_back(s);
    }
    return specs;
  };

  std::vector<ManifestFile> out;
  for (const auto& noise : config.train_noises) {
    const std::string name = noise.stem().string();
    out.push_back({"train_" + name + ".jsonl",
                   make(Split::kTrain, noise, train_clean, "train/" + name, [&](Rng& r) {
                     return r.Uniform(config.train_snr_min, config.train_snr_max);
                   })});
    out.push_back({"valid_" + name + ".jsonl",
                   make(Split::kValid, noise, valid_clean, "valid/" + name,
                        [&](Rng&) { return config.valid_snr; })});
  }
  for (const auto& noise : config.test_noises) {
    const std::string name = noise.stem().string();
    for (double snr : config.test_snrs) {
      const std::string label = SnrLabel(snr);
      out.push_back({"test_" + name + "_" + label + ".jsonl",
                     make(Split::kTest, noise, test_clean, "test/" + name + "/" + label,
                          [snr](Rng&) { return snr; })});
    }
  }
  return out;
}

std::vector<fs::path> WriteCorpus(const std::vector<ManifestFile>& manifests,
                                  const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (const auto& m : manifests) {
    written.push_back(out_dir / m.name);
    WriteManifest(written.back(), m.specs);
  }
  return written;
}

}  // namespace ears
