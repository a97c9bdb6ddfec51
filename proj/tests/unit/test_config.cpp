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

#include "fixtures.hpp"
#include "sqlseq/keyvalues.hpp"
#include "sqlseq/run_config.hpp"

namespace sqlseq {
namespace {

using testing::kind_of;

TEST(KeyValues, ParsesCommentsBlanksAndDuplicates) {
  const auto kv = KeyValues::parse("# desk run\n\n hidden = 64 \nlr=0.5\nhidden=32\nname = two words\n");
  EXPECT_EQ(kv.get_size("hidden", 0), 32u);
  EXPECT_DOUBLE_EQ(kv.get_double("lr", 0.0), 0.5);
  EXPECT_EQ(kv.get_string("name", ""), "two words");
  EXPECT_EQ(kv.get_size("missing", 7), 7u);
  EXPECT_FALSE(kv.contains("missing"));
  EXPECT_EQ(KeyValues::parse(kv.serialize()).entries(), kv.entries());
}

TEST(KeyValues, MalformedInputIsConfigError) {
  EXPECT_EQ(kind_of([] { KeyValues::parse("hidden 64"); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { KeyValues::parse("=3"); }), ErrorKind::config);
  const auto kv = KeyValues::parse("a=-3\nb=abc\nc=maybe\nd=1.5x");
  EXPECT_EQ(kind_of([&] { kv.get_size("a", 0); }), ErrorKind::config);
  EXPECT_EQ(kind_of([&] { kv.get_double("b", 0); }), ErrorKind::config);
  EXPECT_EQ(kind_of([&] { kv.get_bool("c", false); }), ErrorKind::config);
  EXPECT_EQ(kind_of([&] { kv.get_double("d", 0); }), ErrorKind::config);
}

TEST(RunConfig, UnknownKeyRejected) {
  EXPECT_EQ(kind_of([] { resolve_run_config(KeyValues::parse("hiden=3"), {}); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { resolve_run_config({}, KeyValues::parse("variant=transformer")); }), ErrorKind::config);
}

TEST(RunConfig, LearningRateFollowsVariantUnlessExplicit) {
  const auto vanilla = resolve_run_config({}, {});
  EXPECT_DOUBLE_EQ(vanilla.train.lr, 0.01);
  EXPECT_FALSE(vanilla.lr_explicit);
  const auto pointer = resolve_run_config(KeyValues::parse("variant=pointer\ncell_size=30"), {});
  EXPECT_DOUBLE_EQ(pointer.train.lr, 0.001);
  const auto manual = resolve_run_config(KeyValues::parse("variant=pointer\nlr=0.02"), {});
  EXPECT_DOUBLE_EQ(manual.train.lr, 0.02);
  EXPECT_TRUE(manual.lr_explicit);
}

TEST(RunConfig, OverridesWinOverFile) {
  const auto rc = resolve_run_config(KeyValues::parse("hidden=64\nembed=64\nseed=3\nbatch_size=16"),
                                     KeyValues::parse("hidden=32\nmlp_hidden=20,10"));
  EXPECT_EQ(rc.model.hidden, 32u);
  EXPECT_EQ(rc.model.embed, 64u);
  EXPECT_EQ(rc.train.seed, 3u);
  EXPECT_EQ(rc.train.batch_size, 16u);
  EXPECT_EQ(rc.probe.hidden, 32u);
  EXPECT_EQ(rc.probe.mlp_hidden, (std::vector<std::size_t>{20, 10}));
}

TEST(RunConfig, SerializedFormResolvesToSameSettings) {
  const auto rc = resolve_run_config(KeyValues::parse("variant=attention\nhidden=48\nepochs=7\nsplit=test"), {});
  const auto again = resolve_run_config(KeyValues::parse(rc.serialize()), {});
  EXPECT_EQ(again.serialize(), rc.serialize());
  EXPECT_EQ(again.model, rc.model);
  EXPECT_EQ(again.split, "test");
}

}  // namespace
}  // namespace sqlseq
