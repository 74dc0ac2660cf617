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


#include "vjigsaw/tuples.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vjigsaw/error.hpp"

namespace vj {
namespace {

std::string entry_prefix(const TupleListEntry& e) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "#%06d", e.line);
  return e.video_id + buf;
}

}  // namespace

std::string_view to_string(TupleRegime regime) {
  return regime == TupleRegime::kQuadrupleExpand ? "quadruple_expand" : "fixed_index";
}

TupleRegime parse_regime(std::string_view name) {
  if (name == "quadruple_expand" || name == "quadruple") return TupleRegime::kQuadrupleExpand;
  if (name == "fixed_index" || name == "fixed") return TupleRegime::kFixedIndex;
  fail(ErrorKind::kInvalidArgument, "unknown tuple regime '" + std::string(name) + "'");
}

void validate_tuple(const FrameTuple& t) {
  require(!t.frames.empty(), "tuple " + t.tuple_id + " has no frames");
  for (std::size_t i = 1; i < t.frames.size(); ++i) {
    require(t.frames[i - 1].index < t.frames[i].index,
            "tuple " + t.tuple_id + ": frame indices not strictly increasing");
  }
}

std::vector<TupleListEntry> parse_tuple_list(std::string_view text) {
  std::vector<TupleListEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    TupleListEntry e;
    e.line = number;
    if (!(fields >> e.video_id)) continue;
    std::string ref;
    int index = 0;
    while (fields >> ref) e.frames.push_back(FrameRef{ref, index++});
    require(!e.frames.empty(), "tuple list line " + std::to_string(number) + ": no frames");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<TupleListEntry> read_tuple_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open tuple list " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tuple_list(ss.str());
}

std::vector<FrameTuple> expand_quadruple(std::string_view video_id, std::span<const FrameRef> f,
                                         std::string_view id_prefix) {
  require(f.size() == 4, "expand_quadruple needs exactly 4 frames, got " +
                             std::to_string(f.size()));
  static constexpr int kPicks[4][3] = {{0, 1, 2}, {1, 2, 3}, {0, 2, 3}, {0, 1, 3}};
  const std::string prefix = id_prefix.empty() ? std::string(video_id) : std::string(id_prefix);
  std::vector<FrameTuple> out;
  for (int t = 0; t < 4; ++t) {
    FrameTuple tuple;
    tuple.tuple_id = prefix + "." + std::to_string(t);
    tuple.video_id = std::string(video_id);
    tuple.regime = TupleRegime::kQuadrupleExpand;
    for (int k : kPicks[t]) tuple.frames.push_back(f[k]);
    validate_tuple(tuple);
    out.push_back(std::move(tuple));
  }
  return out;
}

FixedIndexResult fixed_index_tuple(std::string_view video_id, std::span<const FrameRef> video,
                                   std::span<const int> indices, std::string_view id_prefix) {
  require(!indices.empty(), "fixed_index_tuple: no indices");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 1, "fixed_index_tuple: indices are 1-based");
    if (i > 0) {
      require(indices[i - 1] < indices[i], "fixed_index_tuple: indices not strictly increasing");
    }
  }
  FixedIndexResult out;
  for (int one_based : indices) {
    if (to_internal_index(one_based) >= static_cast<int>(video.size())) {
      out.skip_reason = "video has " + std::to_string(video.size()) + " frames; index " +
                        std::to_string(one_based) + " unavailable";
      return out;
    }
  }
  FrameTuple tuple;
  tuple.tuple_id = id_prefix.empty() ? std::string(video_id) : std::string(id_prefix);
  tuple.video_id = std::string(video_id);
  tuple.regime = TupleRegime::kFixedIndex;
  for (int one_based : indices) tuple.frames.push_back(video[to_internal_index(one_based)]);
  validate_tuple(tuple);
  out.tuple = std::move(tuple);
  return out;
}

TupleExpansion expand_entries(std::span<const TupleListEntry> entries, TupleRegime regime,
                              std::span<const int> indices) {
  TupleExpansion out;
  for (const auto& e : entries) {
    const std::string prefix = entry_prefix(e);
    if (regime == TupleRegime::kQuadrupleExpand) {
      if (e.frames.size() != 4) {
        TupleExpansion::Skipped s{prefix, e.video_id, {}, ""};
        for (const auto& f : e.frames) s.frames.push_back(f.path);
        s.reason = "expected 4 frames, got " + std::to_string(e.frames.size());
        out.skipped.push_back(std::move(s));
        continue;
      }
      for (auto& t : expand_quadruple(e.video_id, e.frames, prefix)) out.tuples.push_back(t);
    } else {
      auto r = fixed_index_tuple(e.video_id, e.frames, indices, prefix);
      if (r.tuple) {
        out.tuples.push_back(std::move(*r.tuple));
      } else {
        TupleExpansion::Skipped s{prefix, e.video_id, {}, r.skip_reason};
        for (const auto& f : e.frames) s.frames.push_back(f.path);
        out.skipped.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace vj
