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

#include "ears/wav_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "ears/error.hpp"

namespace ears {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

Waveform ReadWav(const std::filesystem::path& path,
                 std::optional<int> required_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const auto malformed = [&](const std::string& why) {
    return Error(Errc::kMalformedFile, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw malformed("not a RIFF/WAVE container");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw malformed("truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw malformed("short fmt chunk");
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw malformed("short extensible fmt chunk");
        // The sub-format GUID starts with the plain format tag.
        format = ReadU16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw malformed("missing fmt chunk");
  if (data == nullptr) throw malformed("missing data chunk");
  if (channels != 1) {
    throw Error(Errc::kUnsupportedFormat,
                path.string() + ": " + std::to_string(channels) +
                    " channels, only mono is supported");
  }
  if (rate == 0) throw malformed("zero sample rate");

  Waveform wav;
  wav.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data_size / 2;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(ReadU16(data + 2 * i));
      wav.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data_size / 4;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t raw = ReadU32(data + 4 * i);
      wav.samples[i] = static_cast<double>(std::bit_cast<float>(raw));
    }
  } else {
    throw Error(Errc::kUnsupportedFormat,
                path.string() + ": format " + std::to_string(format) + " with " +
                    std::to_string(bits) + " bits");
  }
  RequireFinite(wav);
  if (required_rate && wav.sample_rate != *required_rate) {
    throw Error(Errc::kRateMismatch,
                path.string() + ": " + std::to_string(wav.sample_rate) +
                    " Hz, expected " + std::to_string(*required_rate) + " Hz");
  }
  return wav;
}

void WriteWav(const std::filesystem::path& path, const Waveform& wav,
              WavEncoding encoding) {
  RequireFinite(wav);
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(wav.samples.size() * block);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  PutU32(out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(out, 16);
  PutU16(out, pcm ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(wav.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(wav.sample_rate) * block);
  PutU16(out, block);
  PutU16(out, bits);
  out.append("data");
  PutU32(out, data_size);
  if (pcm) {
    constexpr double kMax = 1.0 - 1.0 / 32768.0;
    for (double s : wav.samples) {
      const double clipped = std::clamp(s, -1.0, kMax);
      const auto q = static_cast<std::int16_t>(std::lround(clipped * 32768.0));
      PutU16(out, static_cast<std::uint16_t>(q));
    }
  } else {
    for (double s : wav.samples) {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::kIoError, "cannot create " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(Errc::kIoError, "write failed: " + path.string());
}

}  // namespace ears
