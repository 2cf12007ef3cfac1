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

#ifndef EARS_SYNTH_HPP_
#define EARS_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ears/rng.hpp"
#include "ears/waveform.hpp"

namespace ears::synth {

// Crude source-filter talker: glottal pulse train with a drifting f0, three
// time-varying formant resonators, fricative bursts and pauses.
struct Voice {
  double f0 = 120.0;          // Hz
  double formant_scale = 1.0;  // vocal tract length factor
  double rate = 1.0;           // syllable rate factor
};

Voice RandomVoice(Rng& rng);

Waveform Speech(Rng& rng, const Voice& voice, double seconds, bool pauses = true);

Waveform Babble(Rng& rng, double seconds, int talkers = 6);

// White noise through an all-pole fit of long-term synthetic speech.
Waveform SpeechShapedNoise(Rng& rng, double seconds);

// Broadband rumble, machine hum and hammer-like impacts.
Waveform FactoryNoise(Rng& rng, double seconds);

struct CorpusLayout {
  int train = 30;
  int valid = 6;
  int test = 10;
  double min_seconds = 1.5;
  double max_seconds = 3.5;
  double noise_seconds = 40.0;
  std::uint64_t seed = 1;
};

// Writes clean/{train,valid,test}/*.wav and noise/{babble,ssn,factory}.wav
// under `root`. Returns every written path.
std::vector<std::filesystem::path> WriteCorpus(const std::filesystem::path& root,
                                               const CorpusLayout& layout);

}  // namespace ears::synth

#endif  // EARS_SYNTH_HPP_
