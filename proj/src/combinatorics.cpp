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


#include "vjigsaw/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vjigsaw/error.hpp"

namespace vj {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    fail(ErrorKind::kCapacity, "product " + std::to_string(a) + " * " + std::to_string(b) +
                                   " overflows 64 bits");
  }
  return out;
}

std::uint64_t factorial(int n) {
  require(n >= 0, "factorial of negative number");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f = checked_mul(f, static_cast<std::uint64_t>(i));
  return f;
}

Permutation unrank_lex(std::uint64_t index, int length) {
  require(length >= 1, "unrank_lex: length must be >= 1");
  const std::uint64_t total = factorial(length);
  require(index < total, "unrank_lex: index " + std::to_string(index) + " out of range [0, " +
                             std::to_string(total) + ")");
  std::vector<int> pool(static_cast<std::size_t>(length));
  std::iota(pool.begin(), pool.end(), 1);
  PermRow out(length);
  std::uint64_t block = total;
  for (int pos = 0; pos < length; ++pos) {
    block /= static_cast<std::uint64_t>(length - pos);
    const std::uint64_t digit = index / block;
    index %= block;
    out[pos] = pool[digit];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return Permutation(std::move(out));
}

std::uint64_t rank_lex(const Permutation& p) {
  const int n = p.size();
  std::uint64_t rank = 0;
  for (int pos = 0; pos < n; ++pos) {
    // Lehmer digit: later entries smaller than this one.
    std::uint64_t smaller = 0;
    for (int j = pos + 1; j < n; ++j) smaller += p[j] < p[pos] ? 1 : 0;
    rank = rank * static_cast<std::uint64_t>(n - pos) + smaller;
  }
  return rank;
}

std::vector<std::vector<int>> all_permutations(int n) {
  require(n >= 1, "all_permutations: n must be >= 1");
  std::vector<int> cur(static_cast<std::size_t>(n));
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<std::vector<int>> out;
  out.reserve(factorial(n));
  do {
    out.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));
  return out;
}

}  // namespace vj
