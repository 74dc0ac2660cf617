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


#include "vjigsaw/permutation.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "vjigsaw/error.hpp"

namespace vj {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kChecksum: return "checksum";
    case ErrorKind::kUnsupportedVersion: return "unsupported-version";
    case ErrorKind::kStalePermutation: return "stale-permutation";
  }
  return "unknown";
}

bool is_bijection(const Eigen::Ref<const PermRow>& row) {
  const Eigen::Index n = row.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = row[i];
    if (v < 1 || v > n || seen[v - 1]) return false;
    seen[v - 1] = true;
  }
  return true;
}

Permutation::Permutation(PermRow entries) : entries_(std::move(entries)) {
  require(entries_.size() >= 1, "permutation must have length >= 1");
  require(is_bijection(entries_), "permutation entries are not a bijection on 1..L");
}

Permutation::Permutation(std::initializer_list<int> values)
    : Permutation(std::vector<int>(values)) {}

Permutation::Permutation(const std::vector<int>& values)
    : Permutation(PermRow(Eigen::Map<const Eigen::RowVectorXi>(
          values.data(), static_cast<Eigen::Index>(values.size())))) {}

Permutation Permutation::identity(int length) {
  require(length >= 1, "permutation must have length >= 1");
  return Permutation(PermRow(PermRow::LinSpaced(length, 1, length)));
}

std::vector<int> Permutation::to_vector() const {
  return std::vector<int>(entries_.data(), entries_.data() + entries_.size());
}

Permutation Permutation::inverse() const {
  PermRow inv(entries_.size());
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    inv[entries_[i] - 1] = static_cast<std::int32_t>(i + 1);
  }
  return Permutation(std::move(inv));
}

int hamming(const Permutation& a, const Permutation& b) {
  require(a.size() == b.size(), "hamming: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
  return hamming(a.entries(), b.entries());
}

bool is_block_coherent(const Permutation& p, int n_p, int n_f) {
  require(n_p >= 1 && n_f >= 1, "is_block_coherent: n_p and n_f must be >= 1");
  require(p.size() == n_p * n_f, "is_block_coherent: length " + std::to_string(p.size()) +
                                     " != n_p * n_f = " + std::to_string(n_p * n_f));
  std::vector<bool> frame_used(static_cast<std::size_t>(n_f), false);
  for (int b = 0; b < n_f; ++b) {
    // All values in the block must share the same source frame; the
    // bijection then guarantees the block is that frame's full value set.
    const int frame = (p[b * n_p] - 1) / n_p;
    for (int q = 1; q < n_p; ++q) {
      if ((p[b * n_p + q] - 1) / n_p != frame) return false;
    }
    if (frame_used[frame]) return false;
    frame_used[frame] = true;
  }
  return true;
}

std::string_view to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::kSpatialCoherent: return "spatial_coherent";
    case SamplerMode::kUnconstrainedExact: return "unconstrained_exact";
    case SamplerMode::kUnconstrainedPool: return "unconstrained_pool";
  }
  return "unknown";
}

SamplerMode parse_sampler_mode(std::string_view name) {
  if (name == "spatial_coherent") return SamplerMode::kSpatialCoherent;
  if (name == "unconstrained_exact") return SamplerMode::kUnconstrainedExact;
  if (name == "unconstrained_pool") return SamplerMode::kUnconstrainedPool;
  fail(ErrorKind::kFormat, "unknown sampler mode '" + std::string(name) + "'");
}

PermutationSet::PermutationSet(PermMatrix rows, int n_p, int n_f, SamplerMode mode,
                               std::uint64_t seed)
    : rows_(std::move(rows)), n_p_(n_p), n_f_(n_f), mode_(mode), seed_(seed) {
  require(n_p_ >= 1 && n_f_ >= 1, "permutation set: n_p and n_f must be >= 1");
  require(rows_.rows() >= 1, "permutation set must hold at least one row");
  require(rows_.cols() == static_cast<Eigen::Index>(n_p_) * n_f_,
          "permutation set: row length " + std::to_string(rows_.cols()) +
              " != n_p * n_f = " + std::to_string(n_p_ * n_f_));
  std::set<std::vector<std::int32_t>> seen;
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    require(is_bijection(rows_.row(i)),
            "permutation set: row " + std::to_string(i) + " is not a bijection");
    std::vector<std::int32_t> key(rows_.row(i).data(), rows_.row(i).data() + rows_.cols());
    require(seen.insert(std::move(key)).second,
            "permutation set: duplicate row " + std::to_string(i));
    if (mode_ == SamplerMode::kSpatialCoherent) {
      require(is_block_coherent(row(static_cast<int>(i)), n_p_, n_f_),
              "permutation set: row " + std::to_string(i) + " is not block coherent");
    }
  }
}

DiversityStats diversity(const PermMatrix& rows) {
  const Eigen::Index n = rows.rows();
  require(n >= 2, "diversity needs at least two rows");
  DiversityStats stats;
  stats.histogram.assign(static_cast<std::size_t>(rows.cols()) + 1, 0);
  stats.min_pairwise = static_cast<int>(rows.cols());
  std::int64_t total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const int d = hamming(rows.row(i), rows.row(j));
      ++stats.histogram[d];
      total += d;
      stats.min_pairwise = std::min(stats.min_pairwise, d);
    }
  }
  stats.mean_pairwise = Rational{total, static_cast<std::int64_t>(n) * (n - 1) / 2};
  return stats;
}

DiversityStats diversity(const PermutationSet& set) { return diversity(set.matrix()); }

}  // namespace vj
