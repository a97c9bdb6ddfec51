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

#include <string>
#include <vector>

#include "sqlseq/gradcheck.hpp"

namespace sqlseq {

struct ComponentCheck {
  std::string component;
  GradCheckResult result;
  bool passed = false;
};

// Finite-difference checks at tiny dimensions for each layer (embedding,
// LSTM cell and stacks, one-hot input, bidirectional encoder, attention,
// pointer scores, MLP, cross-entropy), every seq2seq variant, and the
// aggregation probe. A component passes when its worst relative error is
// below `tolerance`.
std::vector<ComponentCheck> run_gradcheck_suite(double tolerance = 1e-4, const GradCheckOptions& options = {});

}  // namespace sqlseq
