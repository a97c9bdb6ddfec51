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

#include "sqlseq/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sqlseq/errors.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {

GradCheckResult finite_difference_check(const LossFn& loss_fn, ParameterStore& params,
                                        const GradCheckOptions& options) {
  if (!(options.eps >= 1e-7 && options.eps <= 1e-3))
    raise(ErrorKind::invalid_range, "finite-difference eps {} outside [1e-7, 1e-3]", options.eps);

  GradSet analytic(params);
  const double base = loss_fn(&analytic);
  const double again = loss_fn(nullptr);
  if (base != again)
    raise(ErrorKind::oracle, "loss function is not deterministic ({} vs {})", base, again);

  Rng rng(options.seed);
  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto& p = params.at(pi);
    auto values = p.tensor.values();
    std::vector<std::size_t> picks(values.size());
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (options.samples_per_param && picks.size() > options.samples_per_param) {
      rng.shuffle(picks);
      picks.resize(options.samples_per_param);
      std::sort(picks.begin(), picks.end());
    }
    const auto grad = analytic[ParamId{static_cast<std::uint32_t>(pi)}];
    for (std::size_t idx : picks) {
      const double saved = values[idx];
      values[idx] = saved + options.eps;
      const double up = loss_fn(nullptr);
      values[idx] = saved - options.eps;
      const double down = loss_fn(nullptr);
      values[idx] = saved;

      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = grad[idx];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      double rel = std::abs(a - numeric) / denom;
      if (std::isnan(rel)) rel = INFINITY;
      ++result.checked;
      if (result.checked == 1 || rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_param = p.name;
        result.worst_index = idx;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace sqlseq
