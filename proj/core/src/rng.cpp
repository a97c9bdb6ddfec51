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

#include "sqlseq/rng.hpp"

#include <cmath>

#include "sqlseq/errors.hpp"

namespace sqlseq {

double Rng::uniform(double lo, double hi) {
  if (!(lo < hi)) raise(ErrorKind::invalid_range, "uniform range requires lo < hi, got [{}, {})", lo, hi);
  double x = lo + (hi - lo) * uniform();
  // lo + span * u can round up to hi when the span is tiny relative to lo.
  return x < hi ? x : std::nextafter(hi, lo);
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) raise(ErrorKind::invalid_range, "below(0) has no valid outcome");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

Rng Rng::fork(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sqlseq
