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


#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vj {

enum class TupleRegime { kQuadrupleExpand, kFixedIndex };

std::string_view to_string(TupleRegime regime);
TupleRegime parse_regime(std::string_view name);

// Frame indices are 1-based in user-facing config and 0-based everywhere
// else; these are the only conversion points.
inline int to_internal_index(int one_based) { return one_based - 1; }
inline int to_user_index(int zero_based) { return zero_based + 1; }

struct FrameRef {
  std::string path;
  int index = 0;  // 0-based temporal position in the source listing

  friend bool operator==(const FrameRef&, const FrameRef&) = default;
};

struct FrameTuple {
  std::string tuple_id;
  std::string video_id;
  std::vector<FrameRef> frames;  // strictly increasing index
  TupleRegime regime = TupleRegime::kQuadrupleExpand;
};

// Checks strictly increasing temporal indices.
void validate_tuple(const FrameTuple& t);

// One line of a tuple list file: `video_id ref_1 ... ref_k`.
struct TupleListEntry {
  int line = 0;  // 1-based line number, part of the tuple id
  std::string video_id;
  std::vector<FrameRef> frames;
};

std::vector<TupleListEntry> parse_tuple_list(std::string_view text);
std::vector<TupleListEntry> read_tuple_list(const std::filesystem::path& path);

// [(f1,f2,f3), (f2,f3,f4), (f1,f3,f4), (f1,f2,f4)]
std::vector<FrameTuple> expand_quadruple(std::string_view video_id, std::span<const FrameRef> f,
                                         std::string_view id_prefix = {});

struct FixedIndexResult {
  std::optional<FrameTuple> tuple;
  std::string skip_reason;  // set when tuple is empty
};

// Picks frames at 1-based `indices`. Out-of-range indices skip the video
// (short videos are not padded); non-increasing indices are an error.
FixedIndexResult fixed_index_tuple(std::string_view video_id, std::span<const FrameRef> video,
                                   std::span<const int> indices,
                                   std::string_view id_prefix = {});

// Tuples for every list entry under the regime, plus skipped entries.
struct TupleExpansion {
  std::vector<FrameTuple> tuples;
  struct Skipped {
    std::string tuple_id;
    std::string video_id;
    std::vector<std::string> frames;
    std::string reason;
  };
  std::vector<Skipped> skipped;
};

TupleExpansion expand_entries(std::span<const TupleListEntry> entries, TupleRegime regime,
                              std::span<const int> indices);

}  // namespace vj
