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

#include "sqlseq/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sqlseq/errors.hpp"

namespace sqlseq {

namespace {

constexpr std::size_t kArenaBlock = std::size_t{1} << 16;

double sigmoid_of(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

class Graph::Arena {
 public:
  double* allocate(std::size_t n) {
    while (current_ < blocks_.size() && offset_ + n > sizes_[current_]) {
      ++current_;
      offset_ = 0;
    }
    if (current_ == blocks_.size()) {
      const std::size_t size = std::max(kArenaBlock, n);
      blocks_.push_back(std::make_unique<double[]>(size));
      sizes_.push_back(size);
      offset_ = 0;
    }
    double* p = blocks_[current_].get() + offset_;
    offset_ += n;
    std::memset(p, 0, n * sizeof(double));
    return p;
  }

  void reset() noexcept {
    current_ = 0;
    offset_ = 0;
  }

 private:
  std::vector<std::unique_ptr<double[]>> blocks_;
  std::vector<std::size_t> sizes_;
  std::size_t current_ = 0;
  std::size_t offset_ = 0;
};

Graph::Graph(const ParameterStore& params, GradSet* grads)
    : params_{&params}, grads_{grads}, arena_{std::make_unique<Arena>()} {
  nodes_.reserve(1024);
}

Graph::~Graph() = default;

void Graph::clear(GradSet* grads) {
  grads_ = grads;
  nodes_.clear();
  var_lists_.clear();
  ids_.clear();
  weights_.clear();
  arena_->reset();
}

Graph::Node& Graph::node(Var v) {
  if (v.id >= nodes_.size()) raise(ErrorKind::index, "invalid graph variable {}", v.id);
  return nodes_[v.id];
}

const Graph::Node& Graph::node(Var v) const {
  if (v.id >= nodes_.size()) raise(ErrorKind::index, "invalid graph variable {}", v.id);
  return nodes_[v.id];
}

bool Graph::needs_grad(std::initializer_list<Var> inputs) const {
  if (!grads_) return false;
  for (Var v : inputs)
    if (v.valid() && nodes_[v.id].grad) return true;
  return false;
}

double* Graph::emplace(Node n, bool with_grad) {
  const std::size_t count = std::size_t{n.rows} * n.cols;
  double* out = arena_->allocate(count);
  n.value = out;
  n.grad = with_grad ? arena_->allocate(count) : nullptr;
  nodes_.push_back(n);
  return out;
}

Var Graph::constant(const Tensor& value) {
  return constant(value.rows(), value.cols(), value.values());
}

Var Graph::constant(std::size_t rows, std::size_t cols, std::span<const double> values) {
  if (rows * cols != values.size() || values.empty())
    raise(ErrorKind::dimension, "constant of {}x{} given {} values", rows, cols, values.size());
  Node n{Op::constant};
  n.rows = static_cast<std::uint32_t>(rows);
  n.cols = static_cast<std::uint32_t>(cols);
  double* out = emplace(n, false);
  std::copy(values.begin(), values.end(), out);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::zeros(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) raise(ErrorKind::dimension, "zeros of {}x{}", rows, cols);
  Node n{Op::constant};
  n.rows = static_cast<std::uint32_t>(rows);
  n.cols = static_cast<std::uint32_t>(cols);
  emplace(n, false);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::param(ParamId id) {
  if (id.index >= params_->size()) raise(ErrorKind::index, "unknown parameter id {}", id.index);
  const Tensor& t = (*params_)[id].tensor;
  Node n{Op::param};
  n.rows = static_cast<std::uint32_t>(t.rows());
  n.cols = static_cast<std::uint32_t>(t.cols());
  n.value = t.values().data();
  n.arg0 = id.index;
  if (grads_) {
    if (grads_->size() != params_->size())
      raise(ErrorKind::dimension, "gradient set does not match parameter store");
    n.grad = (*grads_)[id].data();
  }
  nodes_.push_back(n);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

namespace {

// out[n,m] += x[n,k] . w[k,m]
void gemm_acc(const double* x, const double* w, double* out, std::size_t n, std::size_t k,
              std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out + i * m;
    const double* xrow = x + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = xrow[p];
      if (xv == 0.0) continue;
      const double* wrow = w + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += xv * wrow[j];
    }
  }
}

}  // namespace

Var Graph::matmul(Var x, Var w) {
  const Node& nx = node(x);
  const Node& nw = node(w);
  if (nx.cols != nw.rows)
    raise(ErrorKind::dimension, "matmul inner dimensions differ: {}x{} . {}x{}", nx.rows, nx.cols,
          nw.rows, nw.cols);
  Node n{Op::matmul, x.id, w.id};
  n.rows = nx.rows;
  n.cols = nw.cols;
  const double* xv = nx.value;
  const double* wv = nw.value;
  const std::size_t rows = nx.rows, inner = nx.cols, cols = nw.cols;
  double* out = emplace(n, needs_grad({x, w}));
  gemm_acc(xv, wv, out, rows, inner, cols);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::affine(Var x, Var w, Var b) {
  const Node& nx = node(x);
  const Node& nw = node(w);
  const Node& nb = node(b);
  if (nx.cols != nw.rows)
    raise(ErrorKind::dimension, "affine inner dimensions differ: {}x{} . {}x{}", nx.rows, nx.cols,
          nw.rows, nw.cols);
  if (nb.rows != 1 || nb.cols != nw.cols)
    raise(ErrorKind::dimension, "affine bias must be 1x{}, got {}x{}", nw.cols, nb.rows, nb.cols);
  Node n{Op::affine, x.id, w.id, b.id};
  n.rows = nx.rows;
  n.cols = nw.cols;
  const double* xv = nx.value;
  const double* wv = nw.value;
  const double* bv = nb.value;
  const std::size_t rows = nx.rows, inner = nx.cols, cols = nw.cols;
  double* out = emplace(n, needs_grad({x, w, b}));
  for (std::size_t i = 0; i < rows; ++i) std::copy(bv, bv + cols, out + i * cols);
  gemm_acc(xv, wv, out, rows, inner, cols);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::add(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rows != nb.rows || na.cols != nb.cols)
    raise(ErrorKind::dimension, "add shapes differ: {}x{} vs {}x{}", na.rows, na.cols, nb.rows,
          nb.cols);
  Node n{Op::add, a.id, b.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  const double* bv = nb.value;
  double* out = emplace(n, needs_grad({a, b}));
  const std::size_t count = std::size_t{n.rows} * n.cols;
  for (std::size_t i = 0; i < count; ++i) out[i] = av[i] + bv[i];
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::add_row(Var a, Var r) {
  const Node& na = node(a);
  const Node& nr = node(r);
  if (nr.rows != 1 || nr.cols != na.cols)
    raise(ErrorKind::dimension, "add_row needs a 1x{} row, got {}x{}", na.cols, nr.rows, nr.cols);
  Node n{Op::add_row, a.id, r.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  const double* rv = nr.value;
  double* out = emplace(n, needs_grad({a, r}));
  for (std::size_t i = 0; i < n.rows; ++i)
    for (std::size_t j = 0; j < n.cols; ++j) out[i * n.cols + j] = av[i * n.cols + j] + rv[j];
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::mul(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rows != nb.rows || na.cols != nb.cols)
    raise(ErrorKind::dimension, "mul shapes differ: {}x{} vs {}x{}", na.rows, na.cols, nb.rows,
          nb.cols);
  Node n{Op::mul, a.id, b.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  const double* bv = nb.value;
  double* out = emplace(n, needs_grad({a, b}));
  const std::size_t count = std::size_t{n.rows} * n.cols;
  for (std::size_t i = 0; i < count; ++i) out[i] = av[i] * bv[i];
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::sigmoid(Var a) {
  const Node& na = node(a);
  Node n{Op::sigmoid, a.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  double* out = emplace(n, needs_grad({a}));
  const std::size_t count = std::size_t{n.rows} * n.cols;
  for (std::size_t i = 0; i < count; ++i) out[i] = sigmoid_of(av[i]);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::tanh(Var a) {
  const Node& na = node(a);
  Node n{Op::tanh, a.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  double* out = emplace(n, needs_grad({a}));
  const std::size_t count = std::size_t{n.rows} * n.cols;
  for (std::size_t i = 0; i < count; ++i) out[i] = std::tanh(av[i]);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::concat_cols(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rows != nb.rows)
    raise(ErrorKind::dimension, "concat_cols row counts differ: {} vs {}", na.rows, nb.rows);
  Node n{Op::concat_cols, a.id, b.id};
  n.rows = na.rows;
  n.cols = na.cols + nb.cols;
  const double* av = na.value;
  const double* bv = nb.value;
  const std::size_t ac = na.cols, bc = nb.cols;
  double* out = emplace(n, needs_grad({a, b}));
  for (std::size_t i = 0; i < n.rows; ++i) {
    std::copy(av + i * ac, av + (i + 1) * ac, out + i * n.cols);
    std::copy(bv + i * bc, bv + (i + 1) * bc, out + i * n.cols + ac);
  }
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::stack_rows(std::span<const Var> rows) {
  if (rows.empty()) raise(ErrorKind::dimension, "stack_rows of zero rows");
  const std::uint32_t cols = node(rows[0]).cols;
  bool grad = false;
  for (Var r : rows) {
    const Node& nr = node(r);
    if (nr.rows != 1 || nr.cols != cols)
      raise(ErrorKind::dimension, "stack_rows needs 1x{} rows, got {}x{}", cols, nr.rows, nr.cols);
    grad = grad || needs_grad({r});
  }
  Node n{Op::stack_rows};
  n.rows = static_cast<std::uint32_t>(rows.size());
  n.cols = cols;
  n.arg0 = var_lists_.size();
  n.arg1 = rows.size();
  for (Var r : rows) var_lists_.push_back(r.id);
  double* out = emplace(n, grad);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = nodes_[rows[i].id].value;
    std::copy(src, src + cols, out + i * cols);
  }
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::slice_cols(Var a, std::size_t begin, std::size_t count) {
  const Node& na = node(a);
  if (count == 0 || begin + count > na.cols)
    raise(ErrorKind::dimension, "slice_cols [{}, {}) outside {} columns", begin, begin + count, na.cols);
  Node n{Op::slice_cols, a.id};
  n.rows = na.rows;
  n.cols = static_cast<std::uint32_t>(count);
  n.arg0 = begin;
  const double* av = na.value;
  const std::size_t ac = na.cols;
  double* out = emplace(n, needs_grad({a}));
  for (std::size_t i = 0; i < n.rows; ++i)
    std::copy(av + i * ac + begin, av + i * ac + begin + count, out + i * count);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::row(Var a, std::size_t r) {
  const Node& na = node(a);
  if (r >= na.rows) raise(ErrorKind::index, "row {} outside {} rows", r, na.rows);
  Node n{Op::row, a.id};
  n.rows = 1;
  n.cols = na.cols;
  n.arg0 = r;
  const double* src = na.value + r * na.cols;
  double* out = emplace(n, needs_grad({a}));
  std::copy(src, src + n.cols, out);
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::transpose(Var a) {
  const Node& na = node(a);
  Node n{Op::transpose, a.id};
  n.rows = na.cols;
  n.cols = na.rows;
  const double* av = na.value;
  double* out = emplace(n, needs_grad({a}));
  for (std::size_t i = 0; i < n.cols; ++i)
    for (std::size_t j = 0; j < n.rows; ++j) out[j * n.cols + i] = av[i * n.rows + j];
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::gather_rows(Var table, std::span<const std::int32_t> ids) {
  const Node& nt = node(table);
  if (ids.empty()) raise(ErrorKind::dimension, "gather_rows of zero ids");
  for (std::int32_t id : ids)
    if (id < 0 || static_cast<std::uint32_t>(id) >= nt.rows)
      raise(ErrorKind::index, "row id {} outside table of {} rows", id, nt.rows);
  Node n{Op::gather_rows, table.id};
  n.rows = static_cast<std::uint32_t>(ids.size());
  n.cols = nt.cols;
  n.arg0 = ids_.size();
  n.arg1 = ids.size();
  ids_.insert(ids_.end(), ids.begin(), ids.end());
  const double* tv = nt.value;
  double* out = emplace(n, needs_grad({table}));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* src = tv + static_cast<std::size_t>(ids[i]) * n.cols;
    std::copy(src, src + n.cols, out + i * n.cols);
  }
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::softmax_rows(Var a) {
  const Node& na = node(a);
  Node n{Op::softmax_rows, a.id};
  n.rows = na.rows;
  n.cols = na.cols;
  const double* av = na.value;
  double* out = emplace(n, needs_grad({a}));
  for (std::size_t i = 0; i < n.rows; ++i) {
    const double* x = av + i * n.cols;
    double* y = out + i * n.cols;
    const double mx = *std::max_element(x, x + n.cols);
    if (!std::isfinite(mx)) raise(ErrorKind::numeric, "softmax over non-finite logits");
    double total = 0.0;
    for (std::size_t j = 0; j < n.cols; ++j) total += (y[j] = std::exp(x[j] - mx));
    for (std::size_t j = 0; j < n.cols; ++j) y[j] /= total;
  }
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::sum(Var a) {
  const Node& na = node(a);
  Node n{Op::sum, a.id};
  n.rows = 1;
  n.cols = 1;
  const double* av = na.value;
  const std::size_t count = std::size_t{na.rows} * na.cols;
  double* out = emplace(n, needs_grad({a}));
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) total += av[i];
  out[0] = total;
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::lstm_pointwise(Var gates, Var cell) {
  const Node& ng = node(gates);
  const Node& nc = node(cell);
  if (ng.rows != 1 || nc.rows != 1 || ng.cols != 4 * nc.cols)
    raise(ErrorKind::dimension, "lstm_pointwise needs gates 1x4H and cell 1xH, got {}x{} and {}x{}",
          ng.rows, ng.cols, nc.rows, nc.cols);
  const std::size_t h = nc.cols;
  Node n{Op::lstm_pointwise, gates.id, cell.id};
  n.rows = 1;
  n.cols = static_cast<std::uint32_t>(2 * h);
  const double* z = ng.value;
  const double* c = nc.value;
  double* out = emplace(n, needs_grad({gates, cell}));
  for (std::size_t j = 0; j < h; ++j) {
    const double i = sigmoid_of(z[j]);
    const double f = sigmoid_of(z[h + j]);
    const double g = std::tanh(z[2 * h + j]);
    const double o = sigmoid_of(z[3 * h + j]);
    const double cn = f * c[j] + i * g;
    out[h + j] = cn;
    out[j] = o * std::tanh(cn);
  }
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::weighted_cross_entropy(Var logits, std::span<const std::int32_t> targets,
                                  std::span<const double> weights, double scale) {
  const Node& nl = node(logits);
  if (targets.size() != nl.rows || weights.size() != nl.rows)
    raise(ErrorKind::dimension, "cross entropy over {} rows given {} targets and {} weights", nl.rows,
          targets.size(), weights.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] < 0 || static_cast<std::uint32_t>(targets[t]) >= nl.cols)
      raise(ErrorKind::index, "target id {} at step {} outside [0, {})", targets[t], t, nl.cols);
    if (!(weights[t] >= 0.0)) raise(ErrorKind::invalid_range, "negative loss weight at step {}", t);
  }
  Node n{Op::cross_entropy, logits.id};
  n.rows = 1;
  n.cols = 1;
  n.arg0 = ids_.size();
  n.arg1 = weights_.size();
  n.scale = scale;
  ids_.insert(ids_.end(), targets.begin(), targets.end());
  weights_.insert(weights_.end(), weights.begin(), weights.end());
  const double* lv = nl.value;
  const std::size_t rows = nl.rows, cols = nl.cols;
  double* out = emplace(n, needs_grad({logits}));
  double total = 0.0;
  for (std::size_t t = 0; t < rows; ++t) {
    if (weights[t] == 0.0) continue;
    const double* x = lv + t * cols;
    const double mx = *std::max_element(x, x + cols);
    double se = 0.0;
    for (std::size_t j = 0; j < cols; ++j) se += std::exp(x[j] - mx);
    total += weights[t] * (mx + std::log(se) - x[targets[t]]);
  }
  out[0] = scale * total;
  if (!std::isfinite(out[0])) raise(ErrorKind::numeric, "non-finite cross-entropy loss");
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::sequence_cross_entropy(Var logits, std::span<const std::int32_t> targets,
                                  std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) raise(ErrorKind::invalid_range, "loss weights must not all be zero");
  return weighted_cross_entropy(logits, targets, weights, 1.0 / total);
}

std::size_t Graph::rows(Var v) const { return node(v).rows; }
std::size_t Graph::cols(Var v) const { return node(v).cols; }

std::span<const double> Graph::value(Var v) const {
  const Node& n = node(v);
  return {n.value, std::size_t{n.rows} * n.cols};
}

std::span<const double> Graph::grad(Var v) const {
  const Node& n = node(v);
  if (!n.grad) return {};
  return {n.grad, std::size_t{n.rows} * n.cols};
}

double Graph::scalar(Var v) const {
  const Node& n = node(v);
  if (n.rows != 1 || n.cols != 1) raise(ErrorKind::dimension, "node is {}x{}, not a scalar", n.rows, n.cols);
  return n.value[0];
}

Tensor Graph::to_tensor(Var v) const {
  const Node& n = node(v);
  auto vals = value(v);
  return Tensor({n.rows, n.cols}, std::vector<double>(vals.begin(), vals.end()));
}

void Graph::backward(Var loss) {
  if (!grads_) raise(ErrorKind::config, "backward on an inference-only graph");
  Node& nl = node(loss);
  if (nl.rows != 1 || nl.cols != 1) raise(ErrorKind::dimension, "backward needs a scalar loss");
  if (!nl.grad) return;
  nl.grad[0] += 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.grad) backward_node(n);
  }
}

void Graph::backward_node(const Node& n) {
  const std::size_t count = std::size_t{n.rows} * n.cols;
  const double* dy = n.grad;
  switch (n.op) {
    case Op::constant:
    case Op::param:
      return;
    case Op::matmul:
    case Op::affine: {
      const Node& x = nodes_[n.a];
      const Node& w = nodes_[n.b];
      const std::size_t rows = x.rows, inner = x.cols, cols = w.cols;
      if (x.grad) {
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t p = 0; p < inner; ++p) {
            const double* wrow = w.value + p * cols;
            const double* drow = dy + i * cols;
            double acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) acc += drow[j] * wrow[j];
            x.grad[i * inner + p] += acc;
          }
      }
      if (w.grad) {
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t p = 0; p < inner; ++p) {
            const double xv = x.value[i * inner + p];
            if (xv == 0.0) continue;
            double* gw = w.grad + p * cols;
            const double* drow = dy + i * cols;
            for (std::size_t j = 0; j < cols; ++j) gw[j] += xv * drow[j];
          }
      }
      if (n.op == Op::affine) {
        const Node& b = nodes_[n.c];
        if (b.grad)
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) b.grad[j] += dy[i * cols + j];
      }
      return;
    }
    case Op::add: {
      const Node& a = nodes_[n.a];
      const Node& b = nodes_[n.b];
      if (a.grad) for (std::size_t i = 0; i < count; ++i) a.grad[i] += dy[i];
      if (b.grad) for (std::size_t i = 0; i < count; ++i) b.grad[i] += dy[i];
      return;
    }
    case Op::add_row: {
      const Node& a = nodes_[n.a];
      const Node& r = nodes_[n.b];
      if (a.grad) for (std::size_t i = 0; i < count; ++i) a.grad[i] += dy[i];
      if (r.grad)
        for (std::size_t i = 0; i < n.rows; ++i)
          for (std::size_t j = 0; j < n.cols; ++j) r.grad[j] += dy[i * n.cols + j];
      return;
    }
    case Op::mul: {
      const Node& a = nodes_[n.a];
      const Node& b = nodes_[n.b];
      if (a.grad) for (std::size_t i = 0; i < count; ++i) a.grad[i] += dy[i] * b.value[i];
      if (b.grad) for (std::size_t i = 0; i < count; ++i) b.grad[i] += dy[i] * a.value[i];
      return;
    }
    case Op::sigmoid: {
      const Node& a = nodes_[n.a];
      if (a.grad)
        for (std::size_t i = 0; i < count; ++i) a.grad[i] += dy[i] * n.value[i] * (1.0 - n.value[i]);
      return;
    }
    case Op::tanh: {
      const Node& a = nodes_[n.a];
      if (a.grad)
        for (std::size_t i = 0; i < count; ++i) a.grad[i] += dy[i] * (1.0 - n.value[i] * n.value[i]);
      return;
    }
    case Op::concat_cols: {
      const Node& a = nodes_[n.a];
      const Node& b = nodes_[n.b];
      for (std::size_t i = 0; i < n.rows; ++i) {
        const double* drow = dy + i * n.cols;
        if (a.grad) for (std::size_t j = 0; j < a.cols; ++j) a.grad[i * a.cols + j] += drow[j];
        if (b.grad) for (std::size_t j = 0; j < b.cols; ++j) b.grad[i * b.cols + j] += drow[a.cols + j];
      }
      return;
    }
    case Op::stack_rows: {
      for (std::size_t i = 0; i < n.arg1; ++i) {
        const Node& r = nodes_[var_lists_[n.arg0 + i]];
        if (!r.grad) continue;
        for (std::size_t j = 0; j < n.cols; ++j) r.grad[j] += dy[i * n.cols + j];
      }
      return;
    }
    case Op::slice_cols: {
      const Node& a = nodes_[n.a];
      if (a.grad)
        for (std::size_t i = 0; i < n.rows; ++i)
          for (std::size_t j = 0; j < n.cols; ++j) a.grad[i * a.cols + n.arg0 + j] += dy[i * n.cols + j];
      return;
    }
    case Op::row: {
      const Node& a = nodes_[n.a];
      if (a.grad) for (std::size_t j = 0; j < n.cols; ++j) a.grad[n.arg0 * a.cols + j] += dy[j];
      return;
    }
    case Op::transpose: {
      const Node& a = nodes_[n.a];
      if (a.grad)
        for (std::size_t i = 0; i < a.rows; ++i)
          for (std::size_t j = 0; j < a.cols; ++j) a.grad[i * a.cols + j] += dy[j * n.cols + i];
      return;
    }
    case Op::gather_rows: {
      const Node& t = nodes_[n.a];
      if (t.grad)
        for (std::size_t i = 0; i < n.arg1; ++i) {
          double* dst = t.grad + static_cast<std::size_t>(ids_[n.arg0 + i]) * n.cols;
          for (std::size_t j = 0; j < n.cols; ++j) dst[j] += dy[i * n.cols + j];
        }
      return;
    }
    case Op::softmax_rows: {
      const Node& a = nodes_[n.a];
      if (!a.grad) return;
      for (std::size_t i = 0; i < n.rows; ++i) {
        const double* y = n.value + i * n.cols;
        const double* d = dy + i * n.cols;
        double dot = 0.0;
        for (std::size_t j = 0; j < n.cols; ++j) dot += d[j] * y[j];
        for (std::size_t j = 0; j < n.cols; ++j) a.grad[i * n.cols + j] += y[j] * (d[j] - dot);
      }
      return;
    }
    case Op::sum: {
      const Node& a = nodes_[n.a];
      const std::size_t ac = std::size_t{a.rows} * a.cols;
      if (a.grad) for (std::size_t i = 0; i < ac; ++i) a.grad[i] += dy[0];
      return;
    }
    case Op::lstm_pointwise: {
      const Node& g = nodes_[n.a];
      const Node& c = nodes_[n.b];
      const std::size_t h = c.cols;
      const double* z = g.value;
      for (std::size_t j = 0; j < h; ++j) {
        const double i = sigmoid_of(z[j]);
        const double f = sigmoid_of(z[h + j]);
        const double gg = std::tanh(z[2 * h + j]);
        const double o = sigmoid_of(z[3 * h + j]);
        const double cn = n.value[h + j];
        const double tc = std::tanh(cn);
        const double dh = dy[j];
        const double dc = dy[h + j] + dh * o * (1.0 - tc * tc);
        if (g.grad) {
          g.grad[j] += dc * gg * i * (1.0 - i);
          g.grad[h + j] += dc * c.value[j] * f * (1.0 - f);
          g.grad[2 * h + j] += dc * i * (1.0 - gg * gg);
          g.grad[3 * h + j] += dh * tc * o * (1.0 - o);
        }
        if (c.grad) c.grad[j] += dc * f;
      }
      return;
    }
    case Op::cross_entropy: {
      const Node& l = nodes_[n.a];
      if (!l.grad) return;
      const double up = dy[0] * n.scale;
      for (std::size_t t = 0; t < l.rows; ++t) {
        const double w = weights_[n.arg1 + t];
        if (w == 0.0) continue;
        const double* x = l.value + t * l.cols;
        double* gx = l.grad + t * l.cols;
        const double mx = *std::max_element(x, x + l.cols);
        double se = 0.0;
        for (std::size_t j = 0; j < l.cols; ++j) se += std::exp(x[j] - mx);
        for (std::size_t j = 0; j < l.cols; ++j) gx[j] += up * w * std::exp(x[j] - mx) / se;
        gx[ids_[n.arg0 + t]] -= up * w;
      }
      return;
    }
  }
}

}  // namespace sqlseq
