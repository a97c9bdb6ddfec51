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
#include <functional>
#include <string>

#include "sqlseq/params.hpp"

namespace sqlseq {

// Evaluates the loss at the store's current values. When `grads` is non-null
// the analytic gradient is accumulated into it as well.
using LossFn = std::function<double(GradSet* grads)>;

struct GradCheckOptions {
  double eps = 1e-5;
  // Components sampled per parameter tensor; 0 checks every component.
  std::size_t samples_per_param = 6;
  std::uint64_t seed = 17;
  // Denominator floor: components whose gradients are both below this are
  // effectively compared with an absolute tolerance of tolerance * floor.
  double floor = 1e-5;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// Compares analytic gradients with central differences
// (f(x + eps) - f(x - eps)) / (2 eps) over sampled components of every
// parameter and returns the worst relative error |a - n| / max(|a|, |n|, floor).
//
// Throws invalid_range for eps outside [1e-7, 1e-3] and an oracle error when
// two evaluations of `loss_fn` at the same point disagree.
GradCheckResult finite_difference_check(const LossFn& loss_fn, ParameterStore& params,
                                        const GradCheckOptions& options = {});

}  // namespace sqlseq
