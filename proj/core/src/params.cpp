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

#include "sqlseq/params.hpp"

#include <algorithm>
#include <utility>

#include "sqlseq/errors.hpp"

namespace sqlseq {

Tensor uniform_init(const Shape& shape, double lo, double hi, Rng& rng) {
  if (!(lo < hi)) raise(ErrorKind::invalid_range, "uniform_init requires lo < hi, got [{}, {})", lo, hi);
  Tensor t(shape);
  for (double& x : t.values()) x = rng.uniform(lo, hi);
  return t;
}

ParamId ParameterStore::add(std::string name, Tensor tensor) {
  if (index_.count(name)) raise(ErrorKind::config, "duplicate parameter name '{}'", name);
  const auto id = static_cast<std::uint32_t>(params_.size());
  index_.emplace(name, id);
  params_.push_back({std::move(name), std::move(tensor)});
  return ParamId{id};
}

ParamId ParameterStore::add_uniform(std::string name, const Shape& shape, double lo, double hi,
                                    Rng& rng) {
  return add(std::move(name), uniform_init(shape, lo, hi, rng));
}

std::optional<ParamId> ParameterStore::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return ParamId{it->second};
}

std::size_t ParameterStore::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.size();
  return n;
}

void ParameterStore::zero_grad() noexcept {
  for (auto& p : params_) p.tensor.zero_grad();
}

GradSet::GradSet(const ParameterStore& params) {
  buffers_.reserve(params.size());
  for (const auto& p : params) buffers_.emplace_back(p.tensor.size(), 0.0);
}

void GradSet::zero() noexcept {
  for (auto& b : buffers_) std::fill(b.begin(), b.end(), 0.0);
}

void GradSet::add_to(ParameterStore& params) const {
  if (params.size() != buffers_.size())
    raise(ErrorKind::dimension, "gradient set has {} buffers for {} parameters", buffers_.size(),
          params.size());
  for (std::size_t i = 0; i < buffers_.size(); ++i) {
    auto grad = params.at(i).tensor.grad();
    const auto& src = buffers_[i];
    for (std::size_t j = 0; j < src.size(); ++j) grad[j] += src[j];
  }
}

}  // namespace sqlseq
