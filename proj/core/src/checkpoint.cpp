// Copyright 2026 The sqlseq Authors. All Rights Reserved.
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

#include "sqlseq/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"

namespace sqlseq {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr std::string_view kMagic = "SQLSEQCK";
constexpr std::string_view kTrailer = "END!";
constexpr std::uint32_t kMaxRank = 2;

class Writer {
 public:
  template <typename T>
  void put(T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    out_.append(raw, sizeof(T));
  }
  void bytes(std::string_view s) { out_.append(s); }
  void name(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value;
    std::memcpy(&value, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string name(const char* what) {
    const auto n = get<std::uint32_t>(what);
    return std::string(bytes(n, what));
  }
  bool done() const noexcept { return pos_ == in_.size(); }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n)
      raise(ErrorKind::data, "checkpoint truncated while reading {} at byte {}", what, pos_);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

void Checkpoint::add_text(std::string name, std::string body) {
  if (find_text(name)) raise(ErrorKind::config, "duplicate checkpoint block '{}'", name);
  texts.emplace_back(std::move(name), std::move(body));
}

void Checkpoint::add_tensor(std::string name, Tensor tensor) {
  if (find_tensor(name)) raise(ErrorKind::config, "duplicate checkpoint tensor '{}'", name);
  tensors.emplace_back(std::move(name), std::move(tensor));
}

const std::string* Checkpoint::find_text(std::string_view name) const {
  for (const auto& [n, body] : texts)
    if (n == name) return &body;
  return nullptr;
}

const Tensor* Checkpoint::find_tensor(std::string_view name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

const std::string& Checkpoint::text(std::string_view name) const {
  const std::string* s = find_text(name);
  if (!s) raise(ErrorKind::data, "checkpoint has no '{}' block", name);
  return *s;
}

const Tensor& Checkpoint::tensor(std::string_view name) const {
  const Tensor* t = find_tensor(name);
  if (!t) raise(ErrorKind::data, "checkpoint has no tensor '{}'", name);
  return *t;
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  w.bytes(kMagic);
  w.put(Checkpoint::kVersion);
  w.put(static_cast<std::uint32_t>(ckpt.texts.size()));
  for (const auto& [name, body] : ckpt.texts) {
    w.name(name);
    w.put(static_cast<std::uint64_t>(body.size()));
    w.bytes(body);
  }
  w.put(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    w.name(name);
    w.put(static_cast<std::uint32_t>(t.shape().size()));
    for (std::size_t d : t.shape()) w.put(static_cast<std::uint64_t>(d));
    for (double v : t.values()) w.put(v);
  }
  w.bytes(kTrailer);
  return w.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.remaining() < kMagic.size() || r.bytes(kMagic.size(), "magic") != kMagic)
    raise(ErrorKind::data, "not a sqlseq checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>("version");
  if (version != Checkpoint::kVersion)
    raise(ErrorKind::data, "unsupported checkpoint version {} (expected {})", version, Checkpoint::kVersion);

  Checkpoint ckpt;
  const auto n_texts = r.get<std::uint32_t>("block count");
  for (std::uint32_t i = 0; i < n_texts; ++i) {
    std::string name = r.name("block name");
    const auto size = r.get<std::uint64_t>("block size");
    if (size > r.remaining()) raise(ErrorKind::data, "checkpoint block '{}' overruns the file", name);
    ckpt.add_text(std::move(name), std::string(r.bytes(size, "block body")));
  }
  const auto n_tensors = r.get<std::uint32_t>("tensor count");
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = r.name("tensor name");
    const auto rank = r.get<std::uint32_t>("tensor rank");
    if (rank == 0 || rank > kMaxRank) raise(ErrorKind::data, "tensor '{}' has unsupported rank {}", name, rank);
    Shape shape;
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const auto dim = r.get<std::uint64_t>("tensor dim");
      if (dim == 0 || dim > r.remaining() / sizeof(double))
        raise(ErrorKind::data, "tensor '{}' has implausible dimension {}", name, dim);
      count *= dim;
      shape.push_back(static_cast<std::size_t>(dim));
    }
    if (count > r.remaining() / sizeof(double)) raise(ErrorKind::data, "tensor '{}' overruns the file", name);
    std::vector<double> values(static_cast<std::size_t>(count));
    for (auto& v : values) v = r.get<double>("tensor values");
    ckpt.add_tensor(std::move(name), Tensor(std::move(shape), std::move(values)));
  }
  if (r.remaining() != kTrailer.size() || r.bytes(kTrailer.size(), "trailer") != kTrailer)
    raise(ErrorKind::data, "checkpoint trailer missing or followed by extra bytes");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  try {
    return decode_checkpoint(bytes);
  } catch (const Error& e) {
    raise(e.kind(), "{}: {}", path.string(), e.what());
  }
}

}  // namespace sqlseq
