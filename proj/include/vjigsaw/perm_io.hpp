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
#include <string>
#include <string_view>

#include "vjigsaw/digest.hpp"
#include "vjigsaw/permutation.hpp"

namespace vj {

// Permutation-matrix text format:
//   n_p n_f N mode seed
//   N lines of n_p*n_f space-separated 1-indexed values
// LF line endings, trailing newline after the last row.
std::string format_permutation_set(const PermutationSet& set);
PermutationSet parse_permutation_set(std::string_view text);

void write_permutation_file(const std::filesystem::path& path, const PermutationSet& set);
PermutationSet read_permutation_file(const std::filesystem::path& path);

// SHA-256 of the canonical text form, equal to the digest of the file bytes.
Digest digest_of(const PermutationSet& set);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace vj
