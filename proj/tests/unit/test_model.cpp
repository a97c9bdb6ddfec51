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

#include <cmath>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sqlseq/batching.hpp"
#include "sqlseq/graph.hpp"
#include "sqlseq/model.hpp"

namespace sqlseq {
namespace {

using testing::kind_of;
using testing::tiny_config;
using testing::toy_corpus;

class ModelTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { corpus = new EncodedCorpus(toy_corpus(12)); }
  static void TearDownTestSuite() { delete corpus; }
  static EncodedCorpus* corpus;
};
EncodedCorpus* ModelTest::corpus = nullptr;

TEST_F(ModelTest, SameSeedSameParameters) {
  for (Variant v : kAllVariants) {
    Seq2SeqModel a(tiny_config(v, corpus->vocabs)), b(tiny_config(v, corpus->vocabs));
    ASSERT_EQ(a.params().size(), b.params().size());
    for (std::size_t i = 0; i < a.params().size(); ++i) {
      EXPECT_EQ(a.params().at(i).name, b.params().at(i).name);
      EXPECT_EQ(a.params().at(i).tensor, b.params().at(i).tensor);
    }
  }
  auto other = tiny_config(Variant::vanilla, corpus->vocabs);
  other.seed = 3;
  Seq2SeqModel a(tiny_config(Variant::vanilla, corpus->vocabs)), c(other);
  EXPECT_FALSE(a.params().at(0).tensor == c.params().at(0).tensor);
}

TEST_F(ModelTest, VanillaAndReversedShareArchitecture) {
  Seq2SeqModel v(tiny_config(Variant::vanilla, corpus->vocabs));
  Seq2SeqModel r(tiny_config(Variant::reversed, corpus->vocabs));
  EXPECT_EQ(v.params().scalar_count(), r.params().scalar_count());
  EXPECT_EQ(v.params().size(), r.params().size());
}

TEST_F(ModelTest, PointerHasNoVocabularyProjection) {
  Seq2SeqModel p(tiny_config(Variant::pointer, corpus->vocabs));
  EXPECT_FALSE(p.has_output_projection());
  EXPECT_FALSE(p.params().find("output.w"));
  EXPECT_FALSE(p.params().find("embed.output"));
  Seq2SeqModel a(tiny_config(Variant::attention, corpus->vocabs));
  EXPECT_TRUE(a.has_output_projection());
}

TEST_F(ModelTest, ConfigValidation) {
  auto c = tiny_config(Variant::pointer, corpus->vocabs);
  c.cell_size = 0;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_NE(std::string(e.what()).find("cell_size"), std::string::npos);
  }
  auto bad = tiny_config(Variant::vanilla, corpus->vocabs);
  bad.init_lo = 0.2;
  bad.init_hi = 0.1;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { parse_variant("transformer"); }), ErrorKind::config);
}

TEST_F(ModelTest, ConfigRoundTrip) {
  auto c = tiny_config(Variant::pointer, corpus->vocabs);
  c.init_lo = -0.35;
  c.init_hi = 0.35;
  c.project_keys = false;
  c.pointer_eos = false;
  c.seed = 99;
  EXPECT_EQ(ModelConfig::parse(c.serialize()), c);
  for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
}

TEST(ReverseInput, Involution) {
  const std::vector<TokenId> abc = {4, 5, 6};
  EXPECT_EQ(reverse_input(abc), (std::vector<TokenId>{6, 5, 4}));
  EXPECT_EQ(reverse_input(reverse_input(abc)), abc);
  const std::vector<TokenId> one = {9};
  EXPECT_EQ(reverse_input(one), one);
}

TEST_F(ModelTest, SourceIdsPerVariant) {
  const auto& pair = corpus->pairs.front();
  Seq2SeqModel r(tiny_config(Variant::reversed, corpus->vocabs));
  EXPECT_EQ(r.source_ids(pair.input_ids), reverse_input(pair.input_ids));
  Seq2SeqModel p(tiny_config(Variant::pointer, corpus->vocabs));
  auto src = p.source_ids(pair.input_ids);
  ASSERT_EQ(src.size(), 40u);
  auto with_eos = pair.input_ids;
  with_eos.push_back(Vocabulary::kEos);
  EXPECT_EQ(src, emphasize(with_eos, 40));
}

TEST_F(ModelTest, FreshVocabularyModelLossIsLogV) {
  for (Variant v : {Variant::vanilla, Variant::reversed, Variant::bidirectional, Variant::attention}) {
    Seq2SeqModel m(tiny_config(v, corpus->vocabs));
    double total = 0.0;
    for (const auto& pair : corpus->pairs) {
      Graph g(m.params());
      total += g.scalar(m.forward(g, pair).loss);
    }
    const double expected = std::log(static_cast<double>(corpus->vocabs.output.size()));
    EXPECT_NEAR(total / static_cast<double>(corpus->pairs.size()), expected, 0.02 * expected) << to_string(v);
  }
}

TEST_F(ModelTest, FreshPointerLossIsLogCellSize) {
  Seq2SeqModel m(tiny_config(Variant::pointer, corpus->vocabs));
  double total = 0.0;
  for (const auto& pair : corpus->pairs) {
    Graph g(m.params());
    total += g.scalar(m.forward(g, pair).loss);
  }
  EXPECT_NEAR(total / static_cast<double>(corpus->pairs.size()), std::log(40.0), 0.02 * std::log(40.0));
}

TEST_F(ModelTest, PointerNeedsPointerTargets) {
  Seq2SeqModel m(tiny_config(Variant::pointer, corpus->vocabs));
  auto pair = corpus->pairs.front();
  pair.pointer_targets.reset();
  EXPECT_FALSE(m.accepts(pair));
  Graph g(m.params());
  EXPECT_EQ(kind_of([&] { m.forward(g, pair); }), ErrorKind::data);
}

TEST_F(ModelTest, PointerGoldMapsTerminalToAppendedEos) {
  Seq2SeqModel m(tiny_config(Variant::pointer, corpus->vocabs));
  const auto& pair = corpus->pairs.front();
  const std::vector<double> w(pair.target_ids.size(), 1.0);
  auto gold = m.pointer_gold(pair, w);
  ASSERT_EQ(gold.size(), pair.target_ids.size());
  EXPECT_EQ(gold.back(), static_cast<TokenId>(pair.input_ids.size()));
  const auto src = m.source_ids(pair.input_ids);
  EXPECT_EQ(src[static_cast<std::size_t>(gold.back())], Vocabulary::kEos);
}

TEST_F(ModelTest, GreedyDecodeIsDeterministicAndBounded) {
  for (Variant v : kAllVariants) {
    Seq2SeqModel m(tiny_config(v, corpus->vocabs));
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& input = corpus->pairs[i].input_ids;
      auto a = m.greedy_decode(input);
      auto b = m.greedy_decode(input);
      EXPECT_EQ(a.tokens, b.tokens);
      EXPECT_EQ(a.positions, b.positions);
      EXPECT_LE(a.tokens.size(), m.config().decode_limit());
      for (TokenId t : a.tokens) EXPECT_NE(t, Vocabulary::kEos);
      if (v == Variant::pointer) {
        const auto src = m.source_ids(input);
        ASSERT_EQ(a.positions.size(), a.tokens.size());
        for (std::size_t k = 0; k < a.tokens.size(); ++k) {
          ASSERT_LT(a.positions[k], src.size());
          EXPECT_EQ(a.tokens[k], src[a.positions[k]]);
        }
      }
    }
  }
}

TEST_F(ModelTest, PaddedForwardEqualsUnpaddedForward) {
  for (Variant v : kAllVariants) {
    Seq2SeqModel m(tiny_config(v, corpus->vocabs));
    const auto& pair = corpus->pairs[2];
    EncodedPair padded = pair;
    padded.target_ids.resize(pair.target_ids.size() + 3, Vocabulary::kPad);
    if (padded.pointer_targets) padded.pointer_targets->resize(padded.target_ids.size(), kTerminalPointer);
    std::vector<double> w(padded.target_ids.size(), 0.0);
    for (std::size_t t = 0; t < pair.target_ids.size(); ++t) w[t] = 1.0;
    Graph g1(m.params()), g2(m.params());
    const double unpadded = g1.scalar(m.forward(g1, pair).loss);
    const double with_pad = g2.scalar(m.forward(g2, padded, w, 1.0 / m.effective_weight(padded, w)).loss);
    EXPECT_NEAR(unpadded, with_pad, 1e-13) << to_string(v);
  }
}

}  // namespace
}  // namespace sqlseq
