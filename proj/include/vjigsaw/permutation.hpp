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

#include <Eigen/Core>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace vj {

// One permutation stored as a row of 1-indexed values.
using PermRow = Eigen::Matrix<std::int32_t, 1, Eigen::Dynamic>;
// The permutation matrix: one permutation per row.
using PermMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A bijection on {1, ..., L}. Entry i (0-based position) holds the value
// placed there. Construction validates the bijection.
class Permutation {
 public:
  explicit Permutation(PermRow entries);
  Permutation(std::initializer_list<int> values);
  explicit Permutation(const std::vector<int>& values);

  static Permutation identity(int length);

  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int pos) const { return entries_[pos]; }
  const PermRow& entries() const { return entries_; }
  std::vector<int> to_vector() const;

  Permutation inverse() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.entries_.size() == b.entries_.size() && a.entries_ == b.entries_;
  }

 private:
  PermRow entries_;
};

// True iff `row` is a bijection on {1, ..., row.size()}.
bool is_bijection(const Eigen::Ref<const PermRow>& row);

// Positionwise mismatch count.
template <typename DerivedA, typename DerivedB>
int hamming(const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  return static_cast<int>((a.array() != b.array()).count());
}

int hamming(const Permutation& a, const Permutation& b);

// Each consecutive block of n_p positions holds exactly the values of one
// source frame's block, and distinct blocks come from distinct frames.
bool is_block_coherent(const Permutation& p, int n_p, int n_f);

enum class SamplerMode { kSpatialCoherent, kUnconstrainedExact, kUnconstrainedPool };

std::string_view to_string(SamplerMode mode);
SamplerMode parse_sampler_mode(std::string_view name);

// Exact ratio num/den kept unreduced; den is never zero.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
};

// The matrix of N distinct equal-length permutations plus the metadata
// needed to reproduce it.
class PermutationSet {
 public:
  PermutationSet(PermMatrix rows, int n_p, int n_f, SamplerMode mode, std::uint64_t seed);

  int size() const { return static_cast<int>(rows_.rows()); }
  int length() const { return static_cast<int>(rows_.cols()); }
  int n_p() const { return n_p_; }
  int n_f() const { return n_f_; }
  SamplerMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

  const PermMatrix& matrix() const { return rows_; }
  Permutation row(int i) const { return Permutation(PermRow(rows_.row(i))); }

  friend bool operator==(const PermutationSet& a, const PermutationSet& b) {
    return a.n_p_ == b.n_p_ && a.n_f_ == b.n_f_ && a.mode_ == b.mode_ &&
           a.seed_ == b.seed_ && a.rows_.rows() == b.rows_.rows() &&
           a.rows_.cols() == b.rows_.cols() && a.rows_ == b.rows_;
  }

 private:
  PermMatrix rows_;
  int n_p_;
  int n_f_;
  SamplerMode mode_;
  std::uint64_t seed_;
};

struct DiversityStats {
  int min_pairwise = 0;
  Rational mean_pairwise;               // distance sum over pair count
  std::vector<std::int64_t> histogram;  // index d counts pairs at distance d
};

DiversityStats diversity(const PermutationSet& set);
DiversityStats diversity(const PermMatrix& rows);

}  // namespace vj
