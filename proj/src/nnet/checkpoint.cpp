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

#include "ears/nnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ears/error.hpp"

namespace ears::nnet {
namespace {

constexpr char kMagic[4] = {'E', 'A', 'R', 'S'};
// Refuse absurd headers before allocating.
constexpr std::uint32_t kMaxStringLength = 1u << 20;
constexpr std::uint32_t kMaxRank = 8;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutF32(std::string& out, float v) { PutU32(out, std::bit_cast<std::uint32_t>(v)); }

void PutString(std::string& out, const std::string& s) {
  PutU32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  bool AtEnd() const { return pos_ == bytes_.size(); }

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  float F32() { return std::bit_cast<float>(U32()); }

  std::string String() {
    const std::uint32_t len = U32();
    if (len > kMaxStringLength) throw Error(Errc::kCheckpointCorrupt, "string too long");
    Need(len);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(Errc::kCheckpointCorrupt, "truncated checkpoint");
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const NamedTensor* Checkpoint::Find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  if (ckpt.stats.mean.size() != ckpt.stats.std.size()) {
    throw Error(Errc::kShapeMismatch, "normalization mean/std sizes differ");
  }
  std::string out(kMagic, 4);
  PutU32(out, kCheckpointVersion);
  PutString(out, ckpt.arch);
  PutString(out, ckpt.frontend);
  const auto dim = static_cast<std::uint32_t>(ckpt.stats.mean.size());
  PutU32(out, dim);
  for (std::uint32_t i = 0; i < dim; ++i) PutF32(out, static_cast<float>(ckpt.stats.mean[i]));
  for (std::uint32_t i = 0; i < dim; ++i) PutF32(out, static_cast<float>(ckpt.stats.std[i]));
  for (const auto& t : ckpt.tensors) {
    std::size_t count = 1;
    for (auto d : t.dims) count *= d;
    if (count != t.data.size()) {
      throw Error(Errc::kShapeMismatch, "tensor " + t.name + " data does not match dims");
    }
    PutString(out, t.name);
    PutU32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) PutU32(out, d);
    for (float v : t.data) PutF32(out, v);
  }
  return out;
}

Checkpoint ParseCheckpoint(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::kCheckpointCorrupt, "bad magic");
  }
  Reader in(bytes);
  in.U32();  // magic
  const std::uint32_t version = in.U32();
  if (version != kCheckpointVersion) {
    throw Error(Errc::kCheckpointCorrupt, "unsupported version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.arch = in.String();
  ckpt.frontend = in.String();
  const std::uint32_t dim = in.U32();
  in.Need(static_cast<std::size_t>(dim) * 8);
  ckpt.stats.mean.resize(dim);
  ckpt.stats.std.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) ckpt.stats.mean[i] = in.F32();
  for (std::uint32_t i = 0; i < dim; ++i) ckpt.stats.std[i] = in.F32();
  while (!in.AtEnd()) {
    NamedTensor t;
    t.name = in.String();
    const std::uint32_t rank = in.U32();
    if (rank > kMaxRank) throw Error(Errc::kCheckpointCorrupt, "rank too large in " + t.name);
    std::size_t count = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      t.dims.push_back(in.U32());
      count *= t.dims.back();
    }
    in.Need(count * 4);
    t.data.resize(count);
    for (auto& v : t.data) v = in.F32();
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIoError, "write failed: " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseCheckpoint(bytes);
}

NamedTensor ToNamedTensor(const std::string& name, const Tensor2& t) {
  NamedTensor out;
  out.name = name;
  out.dims = {static_cast<std::uint32_t>(t.rows()), static_cast<std::uint32_t>(t.cols())};
  out.data.resize(static_cast<std::size_t>(t.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) out.data[i] = static_cast<float>(t.data()[i]);
  return out;
}

Tensor2 FromNamedTensor(const NamedTensor& t) {
  if (t.dims.size() != 2) {
    throw Error(Errc::kCheckpointCorrupt, "tensor " + t.name + " is not rank 2");
  }
  Tensor2 out(t.dims[0], t.dims[1]);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = t.data[i];
  return out;
}

Checkpoint MakeCheckpoint(MaskEstimator& model, const std::string& frontend_tag,
                          const NormStats& stats) {
  Checkpoint ckpt;
  ckpt.arch = model.arch().ToString();
  ckpt.frontend = frontend_tag;
  ckpt.stats = stats;
  for (const auto& s : model.State()) ckpt.tensors.push_back(ToNamedTensor(s.name, *s.value));
  return ckpt;
}

std::unique_ptr<MaskEstimator> RestoreModel(const Checkpoint& ckpt) {
  const ArchSpec arch = ArchSpec::Parse(ckpt.arch);
  std::unique_ptr<MaskEstimator> model;
  try {
    if (arch.kind == ArchKind::kMlp) {
      model = std::make_unique<MlpNet>(arch);
    } else {
      model = std::make_unique<LstmNet>(arch);
    }
  } catch (const Error& e) {
    throw Error(Errc::kCheckpointCorrupt, e.what());
  }
  // Statistics cover the un-expanded features: two per mask channel.
  if (ckpt.stats.mean.size() != 2 * arch.output_dim()) {
    throw Error(Errc::kCheckpointCorrupt, "normalization statistics do not fit the network");
  }
  for (const auto& s : model->State()) {
    const NamedTensor* t = ckpt.Find(s.name);
    if (t == nullptr) throw Error(Errc::kCheckpointCorrupt, "missing tensor " + s.name);
    Tensor2 v = FromNamedTensor(*t);
    if (v.rows() != s.value->rows() || v.cols() != s.value->cols()) {
      throw Error(Errc::kCheckpointCorrupt, "tensor " + s.name + " has the wrong shape");
    }
    *s.value = std::move(v);
  }
  return model;
}

}  // namespace ears::nnet
