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

#include "sqlseq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sqlseq/errors.hpp"

namespace sqlseq {

std::size_t element_count(const Shape& shape) {
  if (shape.empty() || shape.size() > 2)
    raise(ErrorKind::dimension, "tensor rank must be 1 or 2, got shape {}", to_string(shape));
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) raise(ErrorKind::dimension, "tensor dimensions must be positive, got {}", to_string(shape));
    n *= d;
  }
  return n;
}

std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape)
    : shape_(std::move(shape)), values_(element_count(shape_), 0.0), grad_(values_.size(), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (element_count(shape_) != values_.size())
    raise(ErrorKind::dimension, "shape {} holds {} values, got {}", to_string(shape_),
          element_count(shape_), values_.size());
  grad_.assign(values_.size(), 0.0);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
  return Tensor({rows, cols}, std::vector<double>(values));
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

std::size_t Tensor::rows() const noexcept {
  return shape_.size() == 2 ? shape_[0] : (shape_.empty() ? 0 : 1);
}

std::size_t Tensor::cols() const noexcept {
  return shape_.empty() ? 0 : shape_.back();
}

void Tensor::zero_grad() noexcept { std::fill(grad_.begin(), grad_.end(), 0.0); }

bool Tensor::all_finite() const noexcept {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(values_.begin(), values_.end(), finite) &&
         std::all_of(grad_.begin(), grad_.end(), finite);
}

void Tensor::require_finite(std::string_view what) const {
  if (!all_finite()) raise(ErrorKind::numeric, "non-finite value in {}", what);
}

}  // namespace sqlseq
