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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sqlseq/params.hpp"
#include "sqlseq/tensor.hpp"

namespace sqlseq {

// Clamps every component into [lo, hi]. Throws invalid_range unless lo < hi.
void clip_gradients(std::span<double> grads, double lo, double hi);
void clip_gradients(ParameterStore& params, double lo, double hi);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_tensor(const Tensor& param);
};

// One bias-corrected Adam update of `param` from its gradient buffer, which
// is zeroed afterwards. `name` labels numeric errors.
void adam_step(Tensor& param, AdamState& state, double lr, std::string_view name = "parameter");

// Adam over every tensor of a ParameterStore, one AdamState per parameter.
class Adam {
 public:
  explicit Adam(const ParameterStore& params);

  void step(ParameterStore& params, double lr);

  std::uint64_t steps() const noexcept { return states_.empty() ? 0 : states_.front().t; }
  std::vector<AdamState>& states() noexcept { return states_; }
  const std::vector<AdamState>& states() const noexcept { return states_; }

 private:
  std::vector<AdamState> states_;
};

}  // namespace sqlseq
