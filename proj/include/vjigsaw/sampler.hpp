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

#include <chrono>
#include <cstdint>
#include <vector>

#include "vjigsaw/permutation.hpp"

namespace vj {

struct SamplerParams {
  int count = 100;  // N, rows to generate
  int n_p = 4;      // patches per frame
  int n_f = 3;      // frames per tuple
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::kSpatialCoherent;
  std::uint64_t pool_size = 0;           // pool mode only
  std::uint64_t budget = 10'000'000;     // exact mode: max candidates per step
  int workers = 1;

  int length() const { return n_p * n_f; }
};

struct SamplerReport {
  // Step h (h = 2..N) at index h-2: best distance sum over h-1 chosen rows.
  std::vector<Rational> per_step_best_distance;
  std::vector<std::uint64_t> per_step_candidates;
  std::uint64_t candidates_evaluated = 0;
  std::chrono::nanoseconds wall_time{0};
  // Largest number of candidate rows resident at once.
  std::uint64_t peak_candidate_memory_rows = 0;
};

struct SampleResult {
  PermutationSet set;
  SamplerReport report;
};

// (n_p!)^n_f * n_f!, capacity error on overflow.
std::uint64_t space_size_spatial(int n_p, int n_f);
// length!, capacity error on overflow.
std::uint64_t space_size_unconstrained(int length);

// The block-coherent search space, enumerated as frame orders x per-frame
// table combinations x first-frame table rows. Only one within-frame table
// (the permutations of 1..n_p) is stored; frame i's rows are that table
// shifted by n_p * i.
class SpatialCandidates {
 public:
  SpatialCandidates(int n_p, int n_f);

  int n_p() const { return n_p_; }
  int n_f() const { return n_f_; }
  int length() const { return n_p_ * n_f_; }
  std::uint64_t table_rows() const { return table_rows_; }     // n_p!
  std::uint64_t combinations() const { return combinations_; }  // (n_p!)^(n_f-1)
  std::uint64_t frame_order_count() const { return frame_orders_.size(); }
  std::uint64_t subset_count() const { return frame_order_count() * combinations_; }
  std::uint64_t size() const { return subset_count() * table_rows_; }

  // 0-based within-frame permutation of 0..n_p-1.
  const std::vector<int>& table_row(std::uint64_t k) const { return table_[k]; }
  // F_f: output block b holds source frame frame_order(f)[b] (0-based).
  const std::vector<int>& frame_order(std::uint64_t f) const { return frame_orders_[f]; }

  // Mixed-radix decode of combination counter i into table indices for
  // frames 1..n_f-1 (frame 0 varies inside the subset). Frame 1 is the
  // least significant digit.
  std::vector<std::uint64_t> decode_combination(std::uint64_t i) const;

  // The n_p! candidate rows sharing frame order f and combination i.
  PermMatrix subset_matrix(std::uint64_t f, std::uint64_t i) const;

  // Candidate at flat enumeration index (f * combinations + i) * n_p! + r.
  PermRow candidate(std::uint64_t index) const;

  // Writes the row for (frame order, per-frame table indices) into out.
  void fill_row(std::uint64_t f, const std::vector<std::uint64_t>& per_frame_k,
                std::int32_t* out) const;

 private:
  int n_p_;
  int n_f_;
  std::uint64_t table_rows_;
  std::uint64_t combinations_;
  std::vector<std::vector<int>> table_;
  std::vector<std::vector<int>> frame_orders_;
};

// Greedy max-average-Hamming sampling over block-coherent permutations.
SampleResult generate_sp(const SamplerParams& params);

// Greedy max-average-Hamming sampling over all permutations of
// 1..n_p*n_f, exact (streamed lexicographic enumeration) or pool mode.
SampleResult generate_orig(const SamplerParams& params);

// Dispatches on params.mode.
SampleResult generate(const SamplerParams& params);

// Uniform random draw of `count` distinct block-coherent permutations; the
// diversity baseline the greedy sampler is measured against.
PermutationSet random_coherent_set(int count, int n_p, int n_f, std::uint64_t seed);

struct OracleResult {
  Rational best_distance;                  // best sum / prefix size
  std::vector<Permutation> argmax_rows;    // every row attaining it
};

// Brute-force greedy step: materializes the whole spatial space and scores
// every row against the prefix by direct Hamming sums. Rows already in the
// prefix are excluded, matching the sampler's duplicate skip.
OracleResult oracle_sp(const SamplerParams& params, const PermMatrix& chosen_prefix);

}  // namespace vj
