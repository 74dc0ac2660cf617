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


#include "vjigsaw/sampler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>

#include "vjigsaw/combinatorics.hpp"
#include "vjigsaw/error.hpp"
#include "vjigsaw/parallel.hpp"
#include "vjigsaw/rng.hpp"

namespace vj {
namespace {

// Largest table (within-frame permutations or frame orders) held in memory.
constexpr std::uint64_t kMaxTableRows = 40320;
// Rows per streamed chunk in exact unconstrained enumeration.
constexpr std::uint64_t kChunkRows = 40320;

using RowKey = std::vector<std::int32_t>;
using MatchMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowKey key_of(const std::int32_t* row, int length) { return RowKey(row, row + length); }

void validate_common(const SamplerParams& p) {
  require(p.count >= 1, "N must be >= 1");
  require(p.n_p >= 1 && p.n_f >= 1, "n_p and n_f must be >= 1");
  require(p.workers >= 1, "worker count must be >= 1");
}

void fisher_yates(std::span<std::int32_t> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(values[i - 1], values[j]);
  }
}

// Best candidate seen by one worker: fewest summed matches (equivalently the
// largest distance sum), earliest enumeration index on ties.
struct LocalBest {
  std::int64_t matches = std::numeric_limits<std::int64_t>::max();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  RowKey row;
  std::uint64_t evaluated = 0;

  bool found() const { return !row.empty(); }
};

LocalBest reduce(std::vector<LocalBest>& locals) {
  LocalBest best;
  for (auto& l : locals) {
    best.evaluated += l.evaluated;
    if (!l.found()) continue;
    if (l.matches < best.matches || (l.matches == best.matches && l.index < best.index)) {
      best.matches = l.matches;
      best.index = l.index;
      best.row = std::move(l.row);
    }
  }
  return best;
}

// Tracks the greedy state shared by every sampler: the chosen rows, a
// per-position value histogram of them, and the step report.
class GreedyState {
 public:
  GreedyState(int length, int count)
      : length_(length), rows_(count, length), matches_(MatchMatrix::Zero(length, length)) {}

  void append(const RowKey& row) {
    rows_.row(size_) = Eigen::Map<const PermRow>(row.data(), length_);
    for (int pos = 0; pos < length_; ++pos) ++matches_(pos, row[pos] - 1);
    chosen_.insert(row);
    ++size_;
  }

  bool contains(const std::int32_t* row) const {
    return chosen_.count(key_of(row, length_)) != 0;
  }

  // matches(pos, v-1) = number of chosen rows holding value v at pos, so a
  // candidate's summed Hamming distance is size*L - sum_pos matches(pos, c[pos]-1).
  const MatchMatrix& matches() const { return matches_; }
  int size() const { return size_; }
  int length() const { return length_; }
  PermMatrix take_rows() { return std::move(rows_); }

  void record_step(SamplerReport& report, const LocalBest& best) const {
    const std::int64_t prior = size_;
    report.per_step_best_distance.push_back(
        Rational{prior * length_ - best.matches, prior});
    report.per_step_candidates.push_back(best.evaluated);
    report.candidates_evaluated += best.evaluated;
  }

 private:
  int length_;
  PermMatrix rows_;
  MatchMatrix matches_;
  std::set<RowKey> chosen_;
  int size_ = 0;
};

// Depth-first lexicographic enumeration of every completion of a fixed
// prefix, carrying the partial match sum down the tree.
class LexScanner {
 public:
  LexScanner(const GreedyState& state, LocalBest& best)
      : state_(state),
        best_(best),
        length_(state.length()),
        cm_(state.matches().data()),
        cur_(static_cast<std::size_t>(length_)),
        used_(static_cast<std::size_t>(length_) + 1, 0) {}

  void scan_chunk(const PermRow& start, int fixed, std::uint64_t rank_base) {
    std::fill(used_.begin(), used_.end(), 0);
    std::int64_t acc = 0;
    for (int pos = 0; pos < fixed; ++pos) {
      cur_[pos] = start[pos];
      used_[start[pos]] = 1;
      acc += cm_[pos * length_ + start[pos] - 1];
    }
    rank_ = rank_base;
    descend(fixed, acc);
  }

 private:
  void leaf(std::int64_t m) {
    ++best_.evaluated;
    if (m < best_.matches && !state_.contains(cur_.data())) {
      best_.matches = m;
      best_.index = rank_;
      best_.row = cur_;
    }
    ++rank_;
  }

  void descend(int pos, std::int64_t acc) {
    const int remaining = length_ - pos;
    if (remaining <= 3) {
      int v[3];
      int n = 0;
      for (int x = 1; x <= length_ && n < remaining; ++x) {
        if (!used_[x]) v[n++] = x;
      }
      if (remaining == 0) return leaf(acc);
      const std::int32_t* r0 = cm_ + pos * length_ - 1;
      if (remaining == 1) {
        cur_[pos] = v[0];
        return leaf(acc + r0[v[0]]);
      }
      const std::int32_t* r1 = r0 + length_;
      if (remaining == 2) {
        emit2(pos, acc, v[0], v[1], r0, r1);
        emit2(pos, acc, v[1], v[0], r0, r1);
        return;
      }
      const std::int32_t* r2 = r1 + length_;
      // Lexicographic order of three sorted values.
      static constexpr int kOrder[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (const auto& o : kOrder) {
        const int a = v[o[0]], b = v[o[1]], c = v[o[2]];
        cur_[pos] = a;
        cur_[pos + 1] = b;
        cur_[pos + 2] = c;
        leaf(acc + r0[a] + r1[b] + r2[c]);
      }
      return;
    }
    const std::int32_t* row = cm_ + pos * length_ - 1;
    for (int x = 1; x <= length_; ++x) {
      if (used_[x]) continue;
      used_[x] = 1;
      cur_[pos] = x;
      descend(pos + 1, acc + row[x]);
      used_[x] = 0;
    }
  }

  void emit2(int pos, std::int64_t acc, int a, int b, const std::int32_t* r0,
             const std::int32_t* r1) {
    cur_[pos] = a;
    cur_[pos + 1] = b;
    leaf(acc + r0[a] + r1[b]);
  }

  const GreedyState& state_;
  LocalBest& best_;
  int length_;
  const std::int32_t* cm_;
  RowKey cur_;
  std::vector<char> used_;
  std::uint64_t rank_ = 0;
};

SampleResult finish(GreedyState& state, const SamplerParams& p, SamplerReport report,
                    std::chrono::steady_clock::time_point t0) {
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - t0);
  return SampleResult{PermutationSet(state.take_rows(), p.n_p, p.n_f, p.mode, p.seed),
                      std::move(report)};
}

}  // namespace

std::uint64_t space_size_spatial(int n_p, int n_f) {
  require(n_p >= 1 && n_f >= 1, "space_size_spatial: n_p and n_f must be >= 1");
  const std::uint64_t table = factorial(n_p);
  std::uint64_t size = factorial(n_f);
  for (int i = 0; i < n_f; ++i) size = checked_mul(size, table);
  return size;
}

std::uint64_t space_size_unconstrained(int length) {
  require(length >= 1, "space_size_unconstrained: length must be >= 1");
  return factorial(length);
}

SpatialCandidates::SpatialCandidates(int n_p, int n_f) : n_p_(n_p), n_f_(n_f) {
  const std::uint64_t total = space_size_spatial(n_p, n_f);
  table_rows_ = factorial(n_p);
  if (table_rows_ > kMaxTableRows || factorial(n_f) > kMaxTableRows) {
    fail(ErrorKind::kCapacity, "spatial space tables too large for n_p=" +
                                   std::to_string(n_p) + ", n_f=" + std::to_string(n_f) +
                                   " (space size " + std::to_string(total) + ")");
  }
  combinations_ = 1;
  for (int j = 1; j < n_f; ++j) combinations_ *= table_rows_;
  table_ = all_permutations(n_p);
  frame_orders_ = all_permutations(n_f);
}

std::vector<std::uint64_t> SpatialCandidates::decode_combination(std::uint64_t i) const {
  std::vector<std::uint64_t> k(static_cast<std::size_t>(n_f_), 0);
  for (int frame = 1; frame < n_f_; ++frame) {
    k[frame] = i % table_rows_;
    i /= table_rows_;
  }
  return k;
}

void SpatialCandidates::fill_row(std::uint64_t f, const std::vector<std::uint64_t>& per_frame_k,
                                 std::int32_t* out) const {
  const auto& order = frame_orders_[f];
  for (int b = 0; b < n_f_; ++b) {
    const int frame = order[b];
    const auto& perm = table_[per_frame_k[frame]];
    for (int q = 0; q < n_p_; ++q) out[b * n_p_ + q] = frame * n_p_ + perm[q] + 1;
  }
}

PermMatrix SpatialCandidates::subset_matrix(std::uint64_t f, std::uint64_t i) const {
  require(f < frame_order_count() && i < combinations_, "subset index out of range");
  PermMatrix out(static_cast<Eigen::Index>(table_rows_), length());
  auto k = decode_combination(i);
  for (std::uint64_t r = 0; r < table_rows_; ++r) {
    k[0] = r;
    fill_row(f, k, out.row(static_cast<Eigen::Index>(r)).data());
  }
  return out;
}

PermRow SpatialCandidates::candidate(std::uint64_t index) const {
  require(index < size(), "candidate index out of range");
  const std::uint64_t r = index % table_rows_;
  const std::uint64_t subset = index / table_rows_;
  auto k = decode_combination(subset % combinations_);
  k[0] = r;
  PermRow row(length());
  fill_row(subset / combinations_, k, row.data());
  return row;
}

SampleResult generate_sp(const SamplerParams& p) {
  validate_common(p);
  require(p.mode == SamplerMode::kSpatialCoherent, "generate_sp requires spatial mode");
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t space_size = space_size_spatial(p.n_p, p.n_f);
  if (static_cast<std::uint64_t>(p.count) > space_size) {
    fail(ErrorKind::kCapacity, "N=" + std::to_string(p.count) +
                                   " exceeds the spatial space size " +
                                   std::to_string(space_size));
  }
  const SpatialCandidates space(p.n_p, p.n_f);
  const int length = p.length();
  const int n_f = p.n_f;
  const std::uint64_t rows = space.table_rows();

  GreedyState state(length, p.count);
  SamplerReport report;
  report.peak_candidate_memory_rows = rows;

  {
    Rng rng(StreamKey(p.seed).with("first_row"));
    std::vector<std::uint64_t> k(static_cast<std::size_t>(n_f));
    for (auto& ki : k) ki = rng.below(rows);
    const std::uint64_t f = rng.below(space.frame_order_count());
    RowKey first(static_cast<std::size_t>(length));
    space.fill_row(f, k, first.data());
    state.append(first);
  }

  // block_scores[(b * n_f + frame) * rows + k]: summed matches when output
  // block b holds frame's table row k.
  std::vector<std::int64_t> block_scores(static_cast<std::size_t>(n_f) * n_f * rows);
  std::vector<LocalBest> locals(static_cast<std::size_t>(p.workers));

  for (int h = 2; h <= p.count; ++h) {
    const auto& cm = state.matches();
    for (int b = 0; b < n_f; ++b) {
      for (int frame = 0; frame < n_f; ++frame) {
        for (std::uint64_t k = 0; k < rows; ++k) {
          const auto& perm = space.table_row(k);
          std::int64_t s = 0;
          for (int q = 0; q < p.n_p; ++q) s += cm(b * p.n_p + q, frame * p.n_p + perm[q]);
          block_scores[(static_cast<std::size_t>(b) * n_f + frame) * rows + k] = s;
        }
      }
    }

    std::fill(locals.begin(), locals.end(), LocalBest{});
    parallel_ranges(space.subset_count(), p.workers,
                    [&](std::uint64_t begin, std::uint64_t end, int w) {
      LocalBest& best = locals[w];
      RowKey row(static_cast<std::size_t>(length));
      for (std::uint64_t s = begin; s < end; ++s) {
        const std::uint64_t f = s / space.combinations();
        auto k = space.decode_combination(s % space.combinations());
        const auto& order = space.frame_order(f);
        std::int64_t fixed = 0;
        int first_block = 0;
        for (int b = 0; b < n_f; ++b) {
          const int frame = order[b];
          if (frame == 0) {
            first_block = b;
          } else {
            fixed += block_scores[(static_cast<std::size_t>(b) * n_f + frame) * rows + k[frame]];
          }
        }
        const std::int64_t* first_scores =
            &block_scores[static_cast<std::size_t>(first_block) * n_f * rows];
        for (std::uint64_t r = 0; r < rows; ++r) {
          const std::int64_t m = fixed + first_scores[r];
          if (m >= best.matches) continue;
          k[0] = r;
          space.fill_row(f, k, row.data());
          if (state.contains(row.data())) continue;
          best.matches = m;
          best.index = s * rows + r;
          best.row = row;
        }
        best.evaluated += rows;
      }
    });
    LocalBest best = reduce(locals);
    state.record_step(report, best);
    state.append(best.row);
  }
  return finish(state, p, std::move(report), t0);
}

SampleResult generate_orig(const SamplerParams& p) {
  validate_common(p);
  require(p.mode == SamplerMode::kUnconstrainedExact ||
              p.mode == SamplerMode::kUnconstrainedPool,
          "generate_orig requires an unconstrained mode");
  const auto t0 = std::chrono::steady_clock::now();
  const int length = p.length();
  const bool exact = p.mode == SamplerMode::kUnconstrainedExact;

  std::uint64_t space_size = 0;
  if (length <= 20) space_size = factorial(length);
  if (exact) {
    if (length > 20 || space_size > p.budget) {
      fail(ErrorKind::kCapacity,
           "exact enumeration of " + std::to_string(length) + "! = " +
               (length > 20 ? std::string("(overflow)") : std::to_string(space_size)) +
               " candidates per step exceeds budget " + std::to_string(p.budget));
    }
  } else {
    require(p.pool_size >= static_cast<std::uint64_t>(p.count),
            "pool_size " + std::to_string(p.pool_size) + " must be >= N=" +
                std::to_string(p.count));
    if (length <= 20 && p.pool_size > space_size) {
      fail(ErrorKind::kCapacity, "pool_size " + std::to_string(p.pool_size) +
                                     " exceeds the " + std::to_string(space_size) +
                                     " distinct permutations of length " +
                                     std::to_string(length));
    }
  }
  if (length <= 20 && static_cast<std::uint64_t>(p.count) > space_size) {
    fail(ErrorKind::kCapacity, "N=" + std::to_string(p.count) + " exceeds " +
                                   std::to_string(length) + "! = " +
                                   std::to_string(space_size));
  }

  GreedyState state(length, p.count);
  SamplerReport report;
  {
    Rng rng(StreamKey(p.seed).with("first_row"));
    RowKey first(static_cast<std::size_t>(length));
    std::iota(first.begin(), first.end(), 1);
    fisher_yates(first, rng);
    state.append(first);
  }

  std::vector<LocalBest> locals(static_cast<std::size_t>(p.workers));

  if (exact) {
    int fixed = 0;
    while (factorial(length - fixed) > kChunkRows) ++fixed;
    const std::uint64_t chunk_rows = factorial(length - fixed);
    const std::uint64_t chunks = space_size / chunk_rows;
    // One live row per worker: candidates are streamed, never stored.
    report.peak_candidate_memory_rows = static_cast<std::uint64_t>(p.workers);

    for (int h = 2; h <= p.count; ++h) {
      std::fill(locals.begin(), locals.end(), LocalBest{});
      parallel_ranges(chunks, p.workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
        LexScanner scanner(state, locals[w]);
        for (std::uint64_t c = begin; c < end; ++c) {
          const std::uint64_t start = c * chunk_rows;
          scanner.scan_chunk(unrank_lex(start, length).entries(), fixed, start);
        }
      });
      LocalBest best = reduce(locals);
      state.record_step(report, best);
      state.append(best.row);
    }
  } else {
    PermMatrix pool(static_cast<Eigen::Index>(p.pool_size), length);
    {
      Rng rng(StreamKey(p.seed).with("pool"));
      std::set<RowKey> seen;
      RowKey row(static_cast<std::size_t>(length));
      Eigen::Index filled = 0;
      while (filled < pool.rows()) {
        std::iota(row.begin(), row.end(), 1);
        fisher_yates(row, rng);
        if (!seen.insert(row).second) continue;
        pool.row(filled++) = Eigen::Map<const PermRow>(row.data(), length);
      }
    }
    report.peak_candidate_memory_rows = p.pool_size;

    for (int h = 2; h <= p.count; ++h) {
      std::fill(locals.begin(), locals.end(), LocalBest{});
      const auto& cm = state.matches();
      parallel_ranges(p.pool_size, p.workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
        LocalBest& best = locals[w];
        for (std::uint64_t i = begin; i < end; ++i) {
          const std::int32_t* row = pool.row(static_cast<Eigen::Index>(i)).data();
          std::int64_t m = 0;
          for (int pos = 0; pos < length; ++pos) m += cm(pos, row[pos] - 1);
          ++best.evaluated;
          if (m >= best.matches || state.contains(row)) continue;
          best.matches = m;
          best.index = i;
          best.row = key_of(row, length);
        }
      });
      LocalBest best = reduce(locals);
      state.record_step(report, best);
      state.append(best.row);
    }
  }
  return finish(state, p, std::move(report), t0);
}

SampleResult generate(const SamplerParams& params) {
  return params.mode == SamplerMode::kSpatialCoherent ? generate_sp(params)
                                                      : generate_orig(params);
}

PermutationSet random_coherent_set(int count, int n_p, int n_f, std::uint64_t seed) {
  require(count >= 1, "count must be >= 1");
  const SpatialCandidates space(n_p, n_f);
  require(static_cast<std::uint64_t>(count) <= space.size(),
          "count exceeds the spatial space size");
  Rng rng(StreamKey(seed).with("random_coherent"));
  std::set<std::uint64_t> picked;
  PermMatrix rows(count, space.length());
  Eigen::Index filled = 0;
  while (filled < count) {
    const std::uint64_t index = rng.below(space.size());
    if (!picked.insert(index).second) continue;
    rows.row(filled++) = space.candidate(index);
  }
  return PermutationSet(std::move(rows), n_p, n_f, SamplerMode::kSpatialCoherent, seed);
}

OracleResult oracle_sp(const SamplerParams& params, const PermMatrix& chosen_prefix) {
  const int n_p = params.n_p, n_f = params.n_f, length = n_p * n_f;
  require(chosen_prefix.rows() >= 1, "oracle_sp: prefix must hold at least one row");
  require(chosen_prefix.cols() == length, "oracle_sp: prefix row length mismatch");
  const std::uint64_t size = space_size_spatial(n_p, n_f);
  if (size > 1'000'000) {
    fail(ErrorKind::kCapacity, "oracle_sp: space size " + std::to_string(size) +
                                   " exceeds 10^6");
  }

  // Every block-coherent row is a frame order plus one within-block
  // permutation per frame; both are unranked from a flat counter.
  const std::uint64_t per_block = factorial(n_p);
  const std::uint64_t orders = factorial(n_f);
  std::vector<PermRow> space;
  space.reserve(size);
  for (std::uint64_t o = 0; o < orders; ++o) {
    const Permutation order = unrank_lex(o, n_f);
    for (std::uint64_t combo = 0; combo < size / orders; ++combo) {
      PermRow row(length);
      std::uint64_t rest = combo;
      for (int frame = 1; frame <= n_f; ++frame) {
        const Permutation within = unrank_lex(rest % per_block, n_p);
        rest /= per_block;
        for (int b = 0; b < n_f; ++b) {
          if (order[b] != frame) continue;
          for (int q = 0; q < n_p; ++q) row[b * n_p + q] = (frame - 1) * n_p + within[q];
        }
      }
      space.push_back(std::move(row));
    }
  }

  OracleResult out;
  std::int64_t best = -1;
  for (const auto& row : space) {
    bool in_prefix = false;
    std::int64_t sum = 0;
    for (Eigen::Index i = 0; i < chosen_prefix.rows(); ++i) {
      const int d = hamming(row, chosen_prefix.row(i));
      in_prefix = in_prefix || d == 0;
      sum += d;
    }
    if (in_prefix) continue;
    if (sum > best) {
      best = sum;
      out.argmax_rows.clear();
    }
    if (sum == best) out.argmax_rows.emplace_back(row);
  }
  out.best_distance = Rational{best, static_cast<std::int64_t>(chosen_prefix.rows())};
  return out;
}

}  // namespace vj
