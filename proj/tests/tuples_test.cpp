// Copyright 2026 The Video Jigsaw Authors. All Rights Reserved.
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

#include <random>
#include <set>

#include "vjigsaw/error.hpp"
#include "vjigsaw/tuples.hpp"

namespace vj {
namespace {

std::vector<FrameRef> refs(const std::vector<std::string>& names) {
  std::vector<FrameRef> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.push_back({names[i], static_cast<int>(i)});
  return out;
}

std::vector<std::string> paths(const FrameTuple& t) {
  std::vector<std::string> out;
  for (const auto& f : t.frames) out.push_back(f.path);
  return out;
}

TEST(ExpandQuadruple, GoldenOrder) {
  const auto f = refs({"a", "b", "c", "d"});
  const auto t = expand_quadruple("v", f);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(paths(t[0]), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(paths(t[1]), (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_EQ(paths(t[2]), (std::vector<std::string>{"a", "c", "d"}));
  EXPECT_EQ(paths(t[3]), (std::vector<std::string>{"a", "b", "d"}));
  for (const auto& x : t) {
    EXPECT_EQ(x.regime, TupleRegime::kQuadrupleExpand);
    EXPECT_EQ(x.video_id, "v");
    EXPECT_LT(x.frames[0].index, x.frames[1].index);
    EXPECT_LT(x.frames[1].index, x.frames[2].index);
  }
}

TEST(ExpandQuadruple, WrongArityIsInvalidArgument) {
  const auto f = refs({"a", "b", "c"});
  try {
    expand_quadruple("v", f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
}

TEST(ExpandQuadruple, RejectsUnorderedInput) {
  std::vector<FrameRef> f = {{"a", 0}, {"b", 2}, {"c", 1}, {"d", 3}};
  EXPECT_THROW(expand_quadruple("v", f), Error);
}

TEST(FixedIndex, Examples) {
  const std::vector<int> idx = {1, 5, 10};
  std::vector<std::string> names;
  for (int i = 1; i <= 10; ++i) names.push_back("f" + std::to_string(i));
  const auto ten = refs(names);
  const auto r = fixed_index_tuple("v", ten, idx);
  ASSERT_TRUE(r.tuple);
  EXPECT_EQ(paths(*r.tuple), (std::vector<std::string>{"f1", "f5", "f10"}));

  const auto eight = refs(std::vector<std::string>(names.begin(), names.begin() + 8));
  const auto s = fixed_index_tuple("v", eight, idx);
  EXPECT_FALSE(s.tuple);
  EXPECT_FALSE(s.skip_reason.empty());

  const std::vector<int> bad = {2, 2, 5};
  EXPECT_THROW(fixed_index_tuple("v", ten, bad), Error);
  const std::vector<int> zero = {0, 2};
  EXPECT_THROW(fixed_index_tuple("v", ten, zero), Error);
}

TEST(IndexBase, ConversionRoundTrip) {
  for (int i = 1; i < 100; ++i) EXPECT_EQ(to_user_index(to_internal_index(i)), i);
  EXPECT_EQ(to_internal_index(1), 0);
}

TEST(TupleList, ParsesAndSkipsComments) {
  const auto e = parse_tuple_list("# header\n\nv1 a.png b.png c.png d.png\nv2 x y\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].video_id, "v1");
  EXPECT_EQ(e[0].line, 3);
  EXPECT_EQ(e[0].frames.size(), 4u);
  EXPECT_EQ(e[0].frames[3].index, 3);
  EXPECT_EQ(e[1].frames[1].path, "y");
  EXPECT_THROW(parse_tuple_list("lonely\n"), Error);
}

TEST(ExpandEntries, CountsPerRegime) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    int quads = 0, videos = 0, long_enough = 0;
    const int lines = 1 + static_cast<int>(gen() % 20);
    for (int l = 0; l < lines; ++l) {
      const int n = 1 + static_cast<int>(gen() % 12);
      text += "vid" + std::to_string(l);
      for (int k = 0; k < n; ++k) text += " f" + std::to_string(k);
      text += '\n';
      quads += n == 4;
      ++videos;
      long_enough += n >= 10;
    }
    const auto entries = parse_tuple_list(text);
    const std::vector<int> idx = {1, 5, 10};
    const auto q = expand_entries(entries, TupleRegime::kQuadrupleExpand, idx);
    EXPECT_EQ(q.tuples.size(), 4u * quads);
    EXPECT_EQ(q.skipped.size(), static_cast<std::size_t>(videos - quads));
    const auto f = expand_entries(entries, TupleRegime::kFixedIndex, idx);
    EXPECT_EQ(f.tuples.size(), static_cast<std::size_t>(long_enough));
    EXPECT_LE(f.tuples.size(), static_cast<std::size_t>(videos));
    for (const auto& t : f.tuples) validate_tuple(t);
    for (const auto& t : q.tuples) validate_tuple(t);
  }
}

TEST(ExpandEntries, TupleIdsUnique) {
  const auto entries = parse_tuple_list("v a b c d\nv e f g h\n");
  const std::vector<int> idx = {1, 2, 3};
  const auto q = expand_entries(entries, TupleRegime::kQuadrupleExpand, idx);
  std::set<std::string> ids;
  for (const auto& t : q.tuples) ids.insert(t.tuple_id);
  EXPECT_EQ(ids.size(), 8u);
}

TEST(RegimeNames, RoundTrip) {
  EXPECT_EQ(parse_regime(to_string(TupleRegime::kFixedIndex)), TupleRegime::kFixedIndex);
  EXPECT_EQ(parse_regime(to_string(TupleRegime::kQuadrupleExpand)), TupleRegime::kQuadrupleExpand);
  EXPECT_EQ(parse_regime("fixed"), TupleRegime::kFixedIndex);
  EXPECT_THROW(parse_regime("other"), Error);
}

}  // namespace
}  // namespace vj
