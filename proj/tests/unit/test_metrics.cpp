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
#include <string>
#include <vector>

#include "sqlseq/errors.hpp"
#include "sqlseq/example.hpp"
#include "sqlseq/metrics.hpp"
#include "sqlseq/rng.hpp"
#include "sqlseq/text.hpp"
#include "support/metric_oracles.hpp"

namespace sqlseq {
namespace {

using oracle::Strings;
using oracle::words;

TEST(ExactMatch, Basics) {
  const std::vector<TokenId> a = {5, 6, 7}, b = {5, 6, 8};
  EXPECT_TRUE(exact_match<TokenId>(a, a));
  EXPECT_FALSE(exact_match<TokenId>(a, b));
  const std::vector<TokenId> with_eos = {5, 6, 7, Vocabulary::kEos, Vocabulary::kPad};
  EXPECT_TRUE(exact_match<TokenId>(strip_special(with_eos), a));
}

TEST(StripSpecial, CutsAtFirstEosAndDropsPad) {
  const std::vector<TokenId> ids = {Vocabulary::kPad, 5, Vocabulary::kEos, 6};
  EXPECT_EQ(strip_special(ids), (std::vector<TokenId>{5}));
}

TEST(BowAccuracy, Examples) {
  const Strings pred = {"select", "a", "where"}, ref = {"select", "b", "where"};
  EXPECT_EQ(bow_ratio<std::string>(pred, ref), (Ratio{2, 3}));
  EXPECT_DOUBLE_EQ(bow_accuracy<std::string>(ref, ref), 1.0);
  const Strings disjoint = {"x", "y"};
  EXPECT_DOUBLE_EQ(bow_accuracy<std::string>(disjoint, ref), 0.0);
  const Strings empty;
  EXPECT_THROW(bow_ratio<std::string>(pred, empty), Error);
  const Strings longer = {"select", "a", "where", "a"};
  EXPECT_EQ(bow_ratio<std::string>(longer, ref), (Ratio{2, 4}));
  EXPECT_EQ(bow_ratio_ref<std::string>(longer, ref), (Ratio{2, 3}));
}

TEST(PositionalAccuracy, Examples) {
  const std::vector<int> ref = {0, 12, 1, 2, 13, 9, 20};
  std::vector<int> pred = ref;
  EXPECT_EQ(positional_ratio<int>(pred, ref), (Ratio{7, 7}));
  pred[1] = 3;
  pred[4] = 4;
  EXPECT_EQ(positional_ratio<int>(pred, ref), (Ratio{5, 7}));
  std::vector<int> wrong(ref.size(), 99);
  EXPECT_DOUBLE_EQ(positional_accuracy<int>(wrong, ref), 0.0);
  const std::vector<int> empty;
  try {
    positional_ratio<int>(pred, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_range);
  }
}

TEST(MetricOracles, ThousandRandomPairsMatchBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [pred, ref] = oracle::random_token_pair(rng, trial);
    const Ratio bow = bow_ratio<TokenId>(pred, ref);
    ASSERT_EQ(bow, oracle::bow(pred, ref)) << trial;
    if (!pred.empty()) {
      ASSERT_EQ(bow, bow_ratio<TokenId>(ref, pred)) << "bow must be symmetric";
    }
    ASSERT_LE(bow.num, bow.den);
    const Ratio pos = positional_ratio<TokenId>(pred, ref);
    ASSERT_EQ(pos, oracle::positional(pred, ref)) << trial;
    ASSERT_EQ(pos.num == pos.den, oracle::exact(pred, ref));
    const bool exact = exact_match<TokenId>(pred, ref);
    ASSERT_EQ(exact, oracle::exact(pred, ref)) << trial;
    if (exact) {
      ASSERT_EQ(bow.num, bow.den);
    }
  }
}

TEST(ClauseBreakdown, WorkedSamples) {
  SqlTarget largest_crowd;
  largest_crowd.agg = 1;
  largest_crowd.sel = 0;
  largest_crowd.conds = {{1, "=", "fitzroy"}};
  const Strings header = {"Crowd", "Home team"};
  const Strings gold = linearize_sql(largest_crowd, header);
  EXPECT_EQ(gold, words("select max crowd from where home-team = fitzroy"));
  EXPECT_EQ(clause_breakdown(gold, gold), (ClauseFlags{true, true, true, true}));

  const auto flags = clause_breakdown(words("select count played where played = 8"),
                                      words("select count school/club-team where no. = 3"));
  EXPECT_TRUE(flags.parsed);
  EXPECT_TRUE(flags.agg);
  EXPECT_FALSE(flags.sel);
  EXPECT_FALSE(flags.where);
}

TEST(ClauseBreakdown, ConditionOrderIgnored) {
  const Strings a = words("select label from where label = alfa records and format = cd");
  const Strings b = words("select label from where format = cd and label = alfa records");
  EXPECT_EQ(clause_breakdown(a, b), (ClauseFlags{true, true, true, true}));
}

TEST(ClauseBreakdown, UnparseablePredictionVersusReference) {
  const Strings ref = words("select crowd from");
  EXPECT_EQ(clause_breakdown(words("crowd from select"), ref), (ClauseFlags{}));
  EXPECT_EQ(clause_breakdown(Strings{}, ref), (ClauseFlags{}));
  try {
    clause_breakdown(ref, words("where = ="));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(ClauseBreakdown, ThousandRandomPairsMatchStructuredOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = oracle::random_clause_case(rng);
    const ClauseFlags flags = clause_breakdown(c.pred, c.ref);
    ASSERT_EQ(flags, c.expected) << trial;
    if (exact_match<std::string>(c.pred, c.ref)) {
      ASSERT_EQ(flags, (ClauseFlags{true, true, true, true}));
    }
  }
}

TEST(ClauseBreakdown, WhereComparisonIsPermutationInvariant) {
  Rng rng(88);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::Query q;
    q.sel = rng.below(oracle::columns().size());
    for (std::size_t k = 0; k < 1 + rng.below(4); ++k)
      q.conds.push_back({rng.below(oracle::columns().size()), "=", oracle::values()[rng.below(oracle::values().size())]});
    oracle::Query shuffled = q;
    rng.shuffle(shuffled.conds);
    ASSERT_TRUE(clause_breakdown(oracle::render(shuffled), oracle::render(q)).where);
  }
}

}  // namespace
}  // namespace sqlseq
