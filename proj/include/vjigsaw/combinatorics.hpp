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
#include <vector>

#include "vjigsaw/permutation.hpp"

namespace vj {

// n!, or a capacity error when it does not fit in 64 bits.
std::uint64_t factorial(int n);

// a * b, or a capacity error on overflow.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

// The index-th permutation of 1..length in lexicographic order.
Permutation unrank_lex(std::uint64_t index, int length);

// Inverse of unrank_lex.
std::uint64_t rank_lex(const Permutation& p);

// All permutations of 0..n-1 in lexicographic order, one per entry.
std::vector<std::vector<int>> all_permutations(int n);

}  // namespace vj
