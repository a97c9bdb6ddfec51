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
#include <memory>
#include <span>
#include <vector>

#include "sqlseq/params.hpp"
#include "sqlseq/tensor.hpp"

namespace sqlseq {

// Handle to a node on a Graph. Only meaningful for the graph that created it.
struct Var {
  static constexpr std::uint32_t kNone = UINT32_MAX;
  std::uint32_t id = kNone;
  bool valid() const noexcept { return id != kNone; }
};

// Reverse-mode tape over 2-D row-major matrices.
//
// Nodes are appended in evaluation order; backward() walks them in reverse.
// Parameter leaves read values straight out of a ParameterStore and
// accumulate gradients into a caller-owned GradSet, so several graphs can
// run over one store at once. Intermediate buffers come from a chunked arena
// that clear() recycles without freeing.
class Graph {
 public:
  // `grads == nullptr` builds an inference-only graph; backward() then throws.
  explicit Graph(const ParameterStore& params, GradSet* grads = nullptr);
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  ~Graph();

  // Drops all nodes, keeps arena memory. `grads` may be rebound.
  void clear(GradSet* grads);
  void clear() { clear(grads_); }

  bool tracks_gradients() const noexcept { return grads_ != nullptr; }

  // Leaves.
  Var constant(const Tensor& value);
  Var constant(std::size_t rows, std::size_t cols, std::span<const double> values);
  Var zeros(std::size_t rows, std::size_t cols);
  Var param(ParamId id);

  // x[n,k] . w[k,m]
  Var matmul(Var x, Var w);
  // x[n,k] . w[k,m] + b[m] (bias broadcast over rows)
  Var affine(Var x, Var w, Var b);
  Var add(Var a, Var b);
  // a[n,m] + row[1,m] broadcast over rows
  Var add_row(Var a, Var row);
  Var mul(Var a, Var b);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var concat_cols(Var a, Var b);
  Var stack_rows(std::span<const Var> rows);
  Var slice_cols(Var a, std::size_t begin, std::size_t count);
  Var row(Var a, std::size_t r);
  Var transpose(Var a);
  // out[i,:] = table[ids[i],:]; backward scatters into the touched rows only.
  Var gather_rows(Var table, std::span<const std::int32_t> ids);
  Var softmax_rows(Var a);
  Var sum(Var a);
  // LSTM pointwise stage. gates[1,4H] holds pre-activations in (i, f, g, o)
  // order, cell[1,H] the previous cell. Output [1,2H] = (h', c').
  Var lstm_pointwise(Var gates, Var cell);
  // Sum_t weights[t] * -log softmax(logits[t])[targets[t]], times `scale`.
  // Returns a 1x1 node.
  Var weighted_cross_entropy(Var logits, std::span<const std::int32_t> targets,
                             std::span<const double> weights, double scale);
  // Weighted mean negative log-likelihood: scale = 1 / sum(weights).
  Var sequence_cross_entropy(Var logits, std::span<const std::int32_t> targets,
                             std::span<const double> weights);

  std::size_t rows(Var v) const;
  std::size_t cols(Var v) const;
  std::span<const double> value(Var v) const;
  std::span<const double> grad(Var v) const;
  double scalar(Var v) const;
  Tensor to_tensor(Var v) const;

  // Seeds d(loss)/d(loss) = 1 and propagates to every node created before `loss`.
  void backward(Var loss);

  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    constant,
    param,
    matmul,
    affine,
    add,
    add_row,
    mul,
    sigmoid,
    tanh,
    concat_cols,
    stack_rows,
    slice_cols,
    row,
    transpose,
    gather_rows,
    softmax_rows,
    sum,
    lstm_pointwise,
    cross_entropy,
  };

  struct Node {
    Op op;
    std::uint32_t a = Var::kNone;
    std::uint32_t b = Var::kNone;
    std::uint32_t c = Var::kNone;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    const double* value = nullptr;
    double* grad = nullptr;
    std::size_t arg0 = 0;
    std::size_t arg1 = 0;
    double scale = 0.0;
  };

  class Arena;

  Node& node(Var v);
  const Node& node(Var v) const;
  // Appends a node with an output buffer of rows*cols zeros; returns the buffer.
  double* emplace(Node n, bool needs_grad);
  bool needs_grad(std::initializer_list<Var> inputs) const;
  void backward_node(const Node& n);

  const ParameterStore* params_;
  GradSet* grads_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> var_lists_;
  std::vector<std::int32_t> ids_;
  std::vector<double> weights_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace sqlseq
