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


#include "vjigsaw/puzzle.hpp"

#include <tuple>

#include "vjigsaw/rng.hpp"

namespace vj {

std::string_view to_string(GrayScope scope) {
  return scope == GrayScope::kTuple ? "tuple" : "frame";
}

GrayScope parse_gray_scope(std::string_view name) {
  if (name == "tuple") return GrayScope::kTuple;
  if (name == "frame") return GrayScope::kFrame;
  fail(ErrorKind::kInvalidArgument, "gray scope must be 'tuple' or 'frame'");
}

int draw_label(std::string_view tuple_id, int n, std::uint64_t seed, std::uint64_t epoch) {
  require(n >= 1, "draw_label: empty permutation set");
  Rng rng(StreamKey(seed).with("label").with(tuple_id).with(epoch));
  return static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
}

PuzzleRecord assemble_record(std::string_view tuple_id, std::span<const ImageU8> frames,
                             const PermutationSet& set, const Digest& set_digest,
                             const BuildOptions& options) {
  require(static_cast<int>(frames.size()) == set.n_f(),
          "tuple has " + std::to_string(frames.size()) + " frames, permutation set expects " +
              std::to_string(set.n_f()));
  require(options.grid.patches() == set.n_p(),
          "grid has " + std::to_string(options.grid.patches()) +
              " cells, permutation set expects n_p=" + std::to_string(set.n_p()));

  Rng rng(StreamKey(options.seed).with("pipeline").with(tuple_id));
  std::vector<std::vector<RawPatch>> per_frame;
  per_frame.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const ImageU8 crop = crop_frame(frames[t], options.grid, options.center_crop ? nullptr : &rng);
    auto patches = sample_patches(crop, options.grid, rng, static_cast<int>(t));
    if (options.gray_scope == GrayScope::kFrame) {
      maybe_grayscale(patches, options.gray_prob, rng);
    }
    per_frame.push_back(std::move(patches));
  }
  auto canonical = canonical_order(per_frame);
  if (options.gray_scope == GrayScope::kTuple) {
    maybe_grayscale(canonical, options.gray_prob, rng);
  }

  PuzzleRecord rec;
  rec.tuple_id = std::string(tuple_id);
  rec.label = draw_label(tuple_id, set.size(), options.seed, options.epoch);
  rec.patches = apply_permutation(canonical, set.row(rec.label));
  rec.perm_set_digest = set_digest;
  return rec;
}

BuildOutcome build_record(const FrameTuple& tuple, const PermutationSet& set,
                          const Digest& set_digest, const BuildOptions& options,
                          const FrameLoader& load) {
  require(static_cast<int>(tuple.frames.size()) == set.n_f(),
          "tuple " + tuple.tuple_id + " has " + std::to_string(tuple.frames.size()) +
              " frames, permutation set expects " + std::to_string(set.n_f()));
  require(options.grid.patches() == set.n_p(),
          "grid has " + std::to_string(options.grid.patches()) +
              " cells, permutation set expects n_p=" + std::to_string(set.n_p()));
  BuildOutcome out;
  std::vector<ImageU8> frames;
  frames.reserve(tuple.frames.size());
  try {
    for (const auto& ref : tuple.frames) frames.push_back(load(ref));
    out.record = assemble_record(tuple.tuple_id, frames, set, set_digest, options);
  } catch (const Error& e) {
    // Unreadable, corrupt or undersized frames skip the tuple.
    out.record.reset();
    out.skip_reason = e.what();
  }
  return out;
}

bool sources_canonical(std::span<const PatchSource> sources, int n_p, int n_f) {
  if (static_cast<int>(sources.size()) != n_p * n_f) return false;
  for (int j = 0; j < n_p * n_f; ++j) {
    if (sources[j].frame != j / n_p) return false;
    if (j % n_p == 0) continue;
    const auto& prev = sources[j - 1];
    if (std::tie(prev.cell_row, prev.cell_col) >= std::tie(sources[j].cell_row, sources[j].cell_col)) {
      return false;
    }
  }
  return true;
}

}  // namespace vj
