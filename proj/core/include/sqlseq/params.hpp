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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqlseq/rng.hpp"
#include "sqlseq/tensor.hpp"

namespace sqlseq {

// Tensor filled with independent draws from [lo, hi). Throws invalid_range when lo >= hi.
Tensor uniform_init(const Shape& shape, double lo, double hi, Rng& rng);

struct ParamId {
  std::uint32_t index = 0;
  friend bool operator==(ParamId, ParamId) = default;
};

struct Parameter {
  std::string name;
  Tensor tensor;
};

// Named, ordered collection of trainable tensors. Registration order is the
// serialization and reduction order.
class ParameterStore {
 public:
  ParamId add(std::string name, Tensor tensor);
  ParamId add_uniform(std::string name, const Shape& shape, double lo, double hi, Rng& rng);

  Parameter& operator[](ParamId id) { return params_[id.index]; }
  const Parameter& operator[](ParamId id) const { return params_[id.index]; }
  Parameter& at(std::size_t i) { return params_.at(i); }
  const Parameter& at(std::size_t i) const { return params_.at(i); }

  std::optional<ParamId> find(const std::string& name) const;
  std::size_t size() const noexcept { return params_.size(); }
  std::size_t scalar_count() const noexcept;

  void zero_grad() noexcept;

  auto begin() noexcept { return params_.begin(); }
  auto end() noexcept { return params_.end(); }
  auto begin() const noexcept { return params_.begin(); }
  auto end() const noexcept { return params_.end(); }

 private:
  std::vector<Parameter> params_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Gradient buffers laid out like a ParameterStore. One per in-flight example
// so that per-example gradients can be reduced in a fixed order.
class GradSet {
 public:
  GradSet() = default;
  explicit GradSet(const ParameterStore& params);

  std::span<double> operator[](ParamId id) { return buffers_[id.index]; }
  std::span<const double> operator[](ParamId id) const { return buffers_[id.index]; }
  std::size_t size() const noexcept { return buffers_.size(); }

  void zero() noexcept;
  // params[i].grad += buffers[i] for every parameter.
  void add_to(ParameterStore& params) const;

 private:
  std::vector<std::vector<double>> buffers_;
};

}  // namespace sqlseq
