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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vjigsaw/digest.hpp"
#include "vjigsaw/error.hpp"
#include "vjigsaw/image.hpp"
#include "vjigsaw/perm_io.hpp"
#include "vjigsaw/permutation.hpp"
#include "vjigsaw/tuples.hpp"

namespace vj {

// Shuffled patches of one tuple plus the index of the permutation used.
template <typename Scalar>
struct PuzzleRecordT {
  std::string tuple_id;
  std::vector<Patch<Scalar>> patches;  // shuffled order
  int label = 0;
  Digest perm_set_digest{};
};

using PuzzleRecord = PuzzleRecordT<std::uint8_t>;
using NormRecord = PuzzleRecordT<float>;

// Frame-by-frame concatenation; position j holds patch number j+1.
template <typename T>
std::vector<T> canonical_order(const std::vector<std::vector<T>>& frames) {
  require(!frames.empty(), "canonical_order: no frames");
  const std::size_t per_frame = frames.front().size();
  std::vector<T> out;
  out.reserve(per_frame * frames.size());
  for (const auto& f : frames) {
    require(f.size() == per_frame, "canonical_order: ragged input (" +
                                       std::to_string(f.size()) + " vs " +
                                       std::to_string(per_frame) + " patches)");
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

// Output position i holds canonical element number p[i] (1-indexed).
template <typename T>
std::vector<T> apply_permutation(std::span<const T> canonical, const Permutation& p) {
  require(static_cast<int>(canonical.size()) == p.size(),
          "apply_permutation: length mismatch (" + std::to_string(canonical.size()) + " vs " +
              std::to_string(p.size()) + ")");
  std::vector<T> out;
  out.reserve(canonical.size());
  for (int i = 0; i < p.size(); ++i) out.push_back(canonical[p[i] - 1]);
  return out;
}

template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& canonical, const Permutation& p) {
  return apply_permutation(std::span<const T>(canonical), p);
}

enum class GrayScope { kTuple, kFrame };

std::string_view to_string(GrayScope scope);
GrayScope parse_gray_scope(std::string_view name);

struct BuildOptions {
  GridSpec grid;
  double gray_prob = 0.5;
  GrayScope gray_scope = GrayScope::kTuple;
  bool center_crop = false;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;  // salts the label stream only
};

// Label for a tuple: uniform over [0, N), keyed by (seed, tuple_id, epoch).
int draw_label(std::string_view tuple_id, int n, std::uint64_t seed, std::uint64_t epoch);

// Crop, patch, grayscale and shuffle decoded frames of one tuple.
PuzzleRecord assemble_record(std::string_view tuple_id, std::span<const ImageU8> frames,
                             const PermutationSet& set, const Digest& set_digest,
                             const BuildOptions& options);

using FrameLoader = std::function<ImageU8(const FrameRef&)>;

struct BuildOutcome {
  std::optional<PuzzleRecord> record;
  std::string skip_reason;
};

// Loads the tuple's frames and assembles its record. Unreadable or
// missing frames skip the tuple instead of failing the build.
BuildOutcome build_record(const FrameTuple& tuple, const PermutationSet& set,
                          const Digest& set_digest, const BuildOptions& options,
                          const FrameLoader& load);

// Position j holds frame j / n_p, cells row-major within each frame.
bool sources_canonical(std::span<const PatchSource> sources, int n_p, int n_f);

// Applies the inverse of the labelled row to the record's patch sources
// and checks they come back in canonical order. Throws a stale-permutation
// error when the record was built against a different matrix.
template <typename Scalar>
bool verify_record(const PuzzleRecordT<Scalar>& rec, const PermutationSet& set,
                   const Digest& set_digest) {
  if (rec.perm_set_digest != set_digest) {
    fail(ErrorKind::kStalePermutation,
         "record " + rec.tuple_id + " was built against permutation set " +
             to_hex(rec.perm_set_digest) + ", not " + to_hex(set_digest));
  }
  if (rec.label < 0 || rec.label >= set.size()) return false;
  if (static_cast<int>(rec.patches.size()) != set.length()) return false;
  std::vector<PatchSource> shuffled;
  shuffled.reserve(rec.patches.size());
  for (const auto& p : rec.patches) shuffled.push_back(p.source);
  const auto restored = apply_permutation(shuffled, set.row(rec.label).inverse());
  return sources_canonical(restored, set.n_p(), set.n_f());
}

template <typename Scalar>
bool verify_record(const PuzzleRecordT<Scalar>& rec, const PermutationSet& set) {
  return verify_record(rec, set, digest_of(set));
}

}  // namespace vj
