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

#include "sqlseq/optim.hpp"

#include <algorithm>
#include <cmath>

#include "sqlseq/errors.hpp"

namespace sqlseq {

void clip_gradients(std::span<double> grads, double lo, double hi) {
  if (!(lo < hi)) raise(ErrorKind::invalid_range, "clip range requires lo < hi, got ({}, {})", lo, hi);
  for (double& g : grads) g = std::clamp(g, lo, hi);
}

void clip_gradients(ParameterStore& params, double lo, double hi) {
  for (auto& p : params) clip_gradients(p.tensor.grad(), lo, hi);
}

AdamState AdamState::for_tensor(const Tensor& param) {
  AdamState s;
  s.m.assign(param.size(), 0.0);
  s.v.assign(param.size(), 0.0);
  return s;
}

void adam_step(Tensor& param, AdamState& state, double lr, std::string_view name) {
  if (state.m.size() != param.size() || state.v.size() != param.size())
    raise(ErrorKind::dimension, "Adam state for '{}' has {} slots, parameter has {}", name,
          state.m.size(), param.size());
  auto grad = param.grad();
  for (double g : grad)
    if (!std::isfinite(g)) raise(ErrorKind::numeric, "non-finite gradient in parameter '{}'", name);

  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  auto values = param.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double g = grad[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    values[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
  param.zero_grad();
}

Adam::Adam(const ParameterStore& params) {
  states_.reserve(params.size());
  for (const auto& p : params) states_.push_back(AdamState::for_tensor(p.tensor));
}

void Adam::step(ParameterStore& params, double lr) {
  if (params.size() != states_.size())
    raise(ErrorKind::dimension, "optimizer tracks {} parameters, store has {}", states_.size(),
          params.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    auto& p = params.at(i);
    adam_step(p.tensor, states_[i], lr, p.name);
  }
}

}  // namespace sqlseq
