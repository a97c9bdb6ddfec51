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
#include <functional>

namespace sqlseq {

// Worker count for parallel sections: hardware concurrency, capped by the
// SQLSEQ_THREADS environment variable when it holds a positive integer.
std::size_t worker_threads();

// Runs fn(i) for i in [0, n) on up to `threads` threads. Work is split into
// contiguous ranges; callers that reduce results must do so by index. The
// first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace sqlseq
