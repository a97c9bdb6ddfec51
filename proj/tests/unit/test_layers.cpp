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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sqlseq/errors.hpp"
#include "sqlseq/graph.hpp"
#include "sqlseq/layers.hpp"
#include "sqlseq/params.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {
namespace {

using Vec = std::vector<double>;

Vec values_of(const Graph& g, Var v) {
  auto s = g.value(v);
  return Vec(s.begin(), s.end());
}

Vec random_vec(std::size_t n, Rng& rng, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Direct LSTM equations with gate blocks laid out as (i, f, g, o).
void reference_cell(const Vec& x, const Vec& h, const Vec& c, const Tensor& wi, const Tensor& wr,
                    const Tensor& b, Vec& h_out, Vec& c_out) {
  const std::size_t H = h.size();
  Vec z(4 * H);
  for (std::size_t j = 0; j < 4 * H; ++j) {
    double s = b.values()[j];
    for (std::size_t m = 0; m < x.size(); ++m) s += x[m] * wi.at(m, j);
    for (std::size_t m = 0; m < H; ++m) s += h[m] * wr.at(m, j);
    z[j] = s;
  }
  h_out.assign(H, 0.0);
  c_out.assign(H, 0.0);
  for (std::size_t k = 0; k < H; ++k) {
    const double i = sigmoid(z[k]), f = sigmoid(z[H + k]), gg = std::tanh(z[2 * H + k]),
                 o = sigmoid(z[3 * H + k]);
    c_out[k] = f * c[k] + i * gg;
    h_out[k] = o * std::tanh(c_out[k]);
  }
}

TEST(Embedding, LooksUpExactRow) {
  ParameterStore ps;
  Rng rng(1);
  ParamId table = ps.add_uniform("e", {6, 3}, -1, 1, rng);
  Graph g(ps);
  const std::vector<TokenId> ids = {4};
  auto row = values_of(g, embedding_lookup(g, table, ids));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(row[c], ps[table].tensor.at(4, c));
}

TEST(Embedding, PadRowIsOrdinary) {
  ParameterStore ps;
  Rng rng(1);
  ParamId table = ps.add_uniform("e", {6, 2}, -1, 1, rng);
  GradSet grads(ps);
  Graph g(ps, &grads);
  const std::vector<TokenId> ids = {Vocabulary::kPad, 5};
  g.backward(g.sum(embedding_lookup(g, table, ids)));
  EXPECT_EQ(grads[table][0], 1.0);
  EXPECT_EQ(grads[table][1], 1.0);
  EXPECT_EQ(grads[table][2], 0.0);
}

class LstmTest : public ::testing::Test {
 protected:
  void SetUp() override { params = LstmParams::create(store, "lstm", 3, 4, 2, {-0.5, 0.5}, rng); }
  Rng rng{7};
  ParameterStore store;
  LstmParams params;
};

TEST_F(LstmTest, ZeroEverythingGivesZeroState) {
  for (auto& p : store)
    for (double& v : p.tensor.values()) v = 0.0;
  Graph g(store);
  auto s = lstm_cell_step(g, params.layers[0], g.zeros(1, 3), {g.zeros(1, 4), g.zeros(1, 4)});
  for (double v : g.value(s.h)) EXPECT_EQ(v, 0.0);
  for (double v : g.value(s.c)) EXPECT_EQ(v, 0.0);
}

TEST_F(LstmTest, SaturatedForgetGateKeepsMemory) {
  auto& layer = params.layers[0];
  for (double& v : store[layer.w_input].tensor.values()) v = 0.0;
  for (double& v : store[layer.w_recurrent].tensor.values()) v = 0.0;
  auto b = store[layer.bias].tensor.values();
  for (std::size_t k = 0; k < 4; ++k) {
    b[k] = -50.0;     // input gate shut
    b[4 + k] = 50.0;  // forget gate open
  }
  Graph g(store);
  const Vec c = {0.3, -0.7, 1.2, 0.05};
  auto s = lstm_cell_step(g, layer, g.constant(1, 3, Vec{1, 2, 3}), {g.zeros(1, 4), g.constant(1, 4, c)});
  auto got = values_of(g, s.c);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], c[k], 1e-12);
}

TEST_F(LstmTest, CellMatchesDirectFormula) {
  Rng data(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = random_vec(3, data), h = random_vec(4, data), c = random_vec(4, data);
    Graph g(store);
    auto& layer = params.layers[0];
    auto s = lstm_cell_step(g, layer, g.constant(1, 3, x), {g.constant(1, 4, h), g.constant(1, 4, c)});
    Vec h_ref, c_ref;
    reference_cell(x, h, c, store[layer.w_input].tensor, store[layer.w_recurrent].tensor,
                   store[layer.bias].tensor, h_ref, c_ref);
    auto hv = values_of(g, s.h), cv = values_of(g, s.c);
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(hv[k], h_ref[k], 1e-12);
      EXPECT_NEAR(cv[k], c_ref[k], 1e-12);
    }
  }
}

TEST_F(LstmTest, SingleStepUnrollEqualsStackStep) {
  Graph g(store);
  Var x = g.constant(1, 3, Vec{0.1, -0.4, 0.9});
  auto unrolled = unroll(g, params, x, zero_state(g, params));
  auto stepped = lstm_stack_step(g, params, x, zero_state(g, params));
  EXPECT_EQ(values_of(g, unrolled.hidden), values_of(g, stepped.back().h));
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(values_of(g, unrolled.final[k].h), values_of(g, stepped[k].h));
    EXPECT_EQ(values_of(g, unrolled.final[k].c), values_of(g, stepped[k].c));
  }
}

TEST_F(LstmTest, UnrollMatchesReferenceAndIsDeterministic) {
  Rng data(9);
  const Vec xs = random_vec(5 * 3, data);
  auto run = [&] {
    Graph g(store);
    auto r = unroll(g, params, g.constant(5, 3, xs), zero_state(g, params));
    return values_of(g, r.hidden);
  };
  const Vec a = run();
  EXPECT_EQ(a, run());

  std::vector<Vec> h(2, Vec(4, 0.0)), c(2, Vec(4, 0.0));
  for (std::size_t t = 0; t < 5; ++t) {
    Vec input(xs.begin() + static_cast<long>(t * 3), xs.begin() + static_cast<long>(t * 3 + 3));
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& layer = params.layers[k];
      Vec ho, co;
      reference_cell(input, h[k], c[k], store[layer.w_input].tensor, store[layer.w_recurrent].tensor,
                     store[layer.bias].tensor, ho, co);
      h[k] = ho;
      c[k] = co;
      input = ho;
    }
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a[t * 4 + j], h[1][j], 1e-12);
  }
}

TEST_F(LstmTest, OneHotUnrollEqualsDenseUnroll) {
  auto one_hot_params = LstmParams::create(store, "oh", 6, 4, 2, {-0.5, 0.5}, rng);
  const std::vector<TokenId> ids = {2, 5, 5, 0};
  Vec dense(ids.size() * 6, 0.0);
  for (std::size_t t = 0; t < ids.size(); ++t) dense[t * 6 + static_cast<std::size_t>(ids[t])] = 1.0;
  Graph g(store);
  auto a = unroll_one_hot(g, one_hot_params, ids, zero_state(g, one_hot_params));
  auto b = unroll(g, one_hot_params, g.constant(ids.size(), 6, dense), zero_state(g, one_hot_params));
  auto av = values_of(g, a.hidden), bv = values_of(g, b.hidden);
  for (std::size_t i = 0; i < av.size(); ++i) EXPECT_NEAR(av[i], bv[i], 1e-14);
}

class BidirectionalTest : public ::testing::Test {
 protected:
  void SetUp() override { params = BidirectionalParams::create(store, "bi", 3, 4, 2, {-0.5, 0.5}, rng); }
  void tie_directions() {
    for (std::size_t k = 0; k < params.forward.layers.size(); ++k) {
      const auto& f = params.forward.layers[k];
      const auto& b = params.backward.layers[k];
      store[b.w_input].tensor = store[f.w_input].tensor;
      store[b.w_recurrent].tensor = store[f.w_recurrent].tensor;
      store[b.bias].tensor = store[f.bias].tensor;
    }
  }
  Rng rng{12};
  ParameterStore store;
  BidirectionalParams params;
};

TEST_F(BidirectionalTest, FeatureDimIsTwiceHidden) {
  Graph g(store);
  Rng data(1);
  auto r = bidirectional_encode(g, params, g.constant(5, 3, random_vec(15, data)));
  EXPECT_EQ(g.rows(r.hidden), 5u);
  EXPECT_EQ(g.cols(r.hidden), 8u);
  EXPECT_EQ(g.cols(r.merged.h), 4u);
  EXPECT_EQ(g.cols(r.merged.c), 4u);
}

TEST_F(BidirectionalTest, PalindromeWithTiedParamsIsMirrorSymmetric) {
  tie_directions();
  const Vec a = {0.3, -0.2, 0.8}, b = {-0.6, 0.1, 0.4};
  Vec xs;
  for (const Vec* row : {&a, &b, &a}) xs.insert(xs.end(), row->begin(), row->end());
  Graph g(store);
  auto out = values_of(g, bidirectional_encode(g, params, g.constant(3, 3, xs)).hidden);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(out[t * 8 + j], out[(2 - t) * 8 + 4 + j], 1e-14);
      EXPECT_NEAR(out[t * 8 + 4 + j], out[(2 - t) * 8 + j], 1e-14);
    }
}

TEST_F(BidirectionalTest, SingleStepBothDirectionsSeeSameToken) {
  tie_directions();
  Graph g(store);
  auto out = values_of(g, bidirectional_encode(g, params, g.constant(1, 3, Vec{0.5, 0.5, -0.5})).hidden);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(out[j], out[4 + j]);
}

TEST_F(BidirectionalTest, EveryPositionDependsOnEveryInput) {
  Rng data(2);
  const Vec base = random_vec(6 * 3, data);
  Graph g0(store);
  const Vec ref = values_of(g0, bidirectional_encode(g0, params, g0.constant(6, 3, base)).hidden);
  for (std::size_t s = 0; s < 6; ++s) {
    Vec perturbed = base;
    perturbed[s * 3] += 0.25;
    Graph g(store);
    const Vec out = values_of(g, bidirectional_encode(g, params, g.constant(6, 3, perturbed)).hidden);
    for (std::size_t t = 0; t < 6; ++t) {
      double diff = 0.0;
      for (std::size_t j = 0; j < 8; ++j) diff += std::abs(out[t * 8 + j] - ref[t * 8 + j]);
      EXPECT_GT(diff, 1e-9) << "position " << t << " ignores input " << s;
    }
  }
}

class AttentionTest : public ::testing::Test {
 protected:
  void SetUp() override { params = AttentionParams::create(store, "att", 4, 3, 5, {-0.8, 0.8}, rng); }
  Rng rng{13};
  ParameterStore store;
  AttentionParams params;
};

TEST_F(AttentionTest, SingleKeyGetsAllWeight) {
  Graph g(store);
  const Vec key = {0.1, 0.2, -0.3, 0.9};
  auto r = additive_attention(g, params, attention_memory(g, params, g.constant(1, 4, key)),
                              g.constant(1, 3, Vec{1, -1, 0.5}));
  EXPECT_DOUBLE_EQ(g.value(r.weights)[0], 1.0);
  auto ctx = values_of(g, r.context);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(ctx[j], key[j], 1e-15);
}

TEST_F(AttentionTest, IdenticalKeysGiveUniformWeights) {
  Graph g(store);
  const Vec key = {0.4, -0.1, 0.2, 0.3};
  Vec keys;
  for (int t = 0; t < 5; ++t) keys.insert(keys.end(), key.begin(), key.end());
  auto r = additive_attention(g, params, attention_memory(g, params, g.constant(5, 4, keys)),
                              g.constant(1, 3, Vec{0.3, 0.3, 0.3}));
  for (double w : g.value(r.weights)) EXPECT_NEAR(w, 0.2, 1e-15);
}

TEST_F(AttentionTest, MatchesDirectFormulaAndPointerScores) {
  Rng data(3);
  const Vec keys = random_vec(3 * 4, data), query = random_vec(3, data);
  Graph g(store);
  auto mem = attention_memory(g, params, g.constant(3, 4, keys));
  Var q = g.constant(1, 3, query);
  auto r = additive_attention(g, params, mem, q);
  Var ptr = pointer_scores(g, params, mem, q);

  const Tensor& wk = store[params.w_key].tensor;
  const Tensor& wq = store[params.w_query].tensor;
  const Tensor& v = store[params.v].tensor;
  Vec scores(3);
  for (std::size_t t = 0; t < 3; ++t) {
    double s = 0.0;
    for (std::size_t a = 0; a < 5; ++a) {
      double z = 0.0;
      for (std::size_t m = 0; m < 4; ++m) z += keys[t * 4 + m] * wk.at(m, a);
      for (std::size_t m = 0; m < 3; ++m) z += query[m] * wq.at(m, a);
      s += v.at(a, 0) * std::tanh(z);
    }
    scores[t] = s;
  }
  double mx = *std::max_element(scores.begin(), scores.end()), z = 0.0;
  for (double s : scores) z += std::exp(s - mx);
  auto w = values_of(g, r.weights);
  auto ctx = values_of(g, r.context);
  ASSERT_EQ(g.cols(ptr), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_NEAR(g.value(r.scores)[t], scores[t], 1e-14);
    EXPECT_EQ(g.value(ptr)[t], g.value(r.scores)[t]);
    EXPECT_NEAR(w[t], std::exp(scores[t] - mx) / z, 1e-14);
  }
  for (std::size_t j = 0; j < 4; ++j) {
    double expect = 0.0;
    for (std::size_t t = 0; t < 3; ++t) expect += w[t] * keys[t * 4 + j];
    EXPECT_NEAR(ctx[j], expect, 1e-14);
  }
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto argmax = [](const Vec& xs) { return std::max_element(xs.begin(), xs.end()) - xs.begin(); };
  EXPECT_EQ(argmax(values_of(g, ptr)), argmax(w));
}

TEST_F(AttentionTest, KeyWidthMismatchIsDimensionError) {
  Graph g(store);
  Var keys = g.zeros(2, 3);
  try {
    attention_memory(g, params, keys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
}

TEST(Mlp, ZeroWeightsGiveUniformDistribution) {
  ParameterStore ps;
  Rng rng(4);
  const std::vector<std::size_t> hidden = {7};
  auto mlp = MlpParams::create(ps, "mlp", 5, hidden, 6, {-0.1, 0.1}, rng);
  for (auto& p : ps)
    for (double& v : p.tensor.values()) v = 0.0;
  Graph g(ps);
  Var logits = mlp_forward(g, mlp, g.constant(1, 5, Vec{1, 2, 3, 4, 5}));
  ASSERT_EQ(g.cols(logits), 6u);
  for (double p : g.value(g.softmax_rows(logits))) EXPECT_NEAR(p, 1.0 / 6.0, 1e-15);
}

TEST(Mlp, AffineTanhAffine) {
  ParameterStore ps;
  Rng rng(5);
  const std::vector<std::size_t> hidden = {2};
  auto mlp = MlpParams::create(ps, "mlp", 2, hidden, 6, {-1, 1}, rng);
  const Vec x = {0.7, -1.3};
  Graph g(ps);
  auto out = values_of(g, mlp_forward(g, mlp, g.constant(1, 2, x)));
  const Tensor& w0 = ps[mlp.weights[0]].tensor;
  const Tensor& b0 = ps[mlp.biases[0]].tensor;
  const Tensor& w1 = ps[mlp.weights[1]].tensor;
  const Tensor& b1 = ps[mlp.biases[1]].tensor;
  Vec h(2);
  for (std::size_t j = 0; j < 2; ++j) h[j] = std::tanh(x[0] * w0.at(0, j) + x[1] * w0.at(1, j) + b0.values()[j]);
  for (std::size_t k = 0; k < 6; ++k)
    EXPECT_NEAR(out[k], h[0] * w1.at(0, k) + h[1] * w1.at(1, k) + b1.values()[k], 1e-15);
}

}  // namespace
}  // namespace sqlseq
