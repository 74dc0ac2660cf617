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


#include "vjigsaw/perm_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "vjigsaw/error.hpp"

namespace vj {
namespace {

// Splits on single spaces; the format never emits other whitespace.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    out.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail(ErrorKind::kFormat, where + ": bad integer '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_permutation_set(const PermutationSet& set) {
  std::string out;
  out += std::to_string(set.n_p()) + ' ' + std::to_string(set.n_f()) + ' ' +
         std::to_string(set.size()) + ' ' + std::string(to_string(set.mode())) + ' ' +
         std::to_string(set.seed()) + '\n';
  const auto& m = set.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += std::to_string(m(i, j));
    }
    out += '\n';
  }
  return out;
}

PermutationSet parse_permutation_set(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      fail(ErrorKind::kFormat, "permutation file: missing trailing newline");
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) fail(ErrorKind::kFormat, "permutation file: empty");
  const auto header = split_fields(lines[0]);
  if (header.size() != 5) fail(ErrorKind::kFormat, "permutation file: header needs 5 fields");
  const int n_p = parse_number<int>(header[0], "header n_p");
  const int n_f = parse_number<int>(header[1], "header n_f");
  const int n = parse_number<int>(header[2], "header N");
  const SamplerMode mode = parse_sampler_mode(header[3]);
  const auto seed = parse_number<std::uint64_t>(header[4], "header seed");
  if (n_p < 1 || n_f < 1 || n < 1) fail(ErrorKind::kFormat, "permutation file: bad header");
  if (static_cast<int>(lines.size()) - 1 != n) {
    fail(ErrorKind::kFormat, "permutation file: header says " + std::to_string(n) +
                                 " rows, found " + std::to_string(lines.size() - 1));
  }
  const int length = n_p * n_f;
  PermMatrix rows(n, length);
  for (int i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[i + 1]);
    if (static_cast<int>(fields.size()) != length) {
      fail(ErrorKind::kFormat, "permutation file: row " + std::to_string(i + 1) + " has " +
                                   std::to_string(fields.size()) + " entries, expected " +
                                   std::to_string(length));
    }
    for (int j = 0; j < length; ++j) {
      rows(i, j) = parse_number<std::int32_t>(fields[j], "row " + std::to_string(i + 1));
    }
  }
  try {
    return PermutationSet(std::move(rows), n_p, n_f, mode, seed);
  } catch (const Error& e) {
    fail(ErrorKind::kFormat, std::string("permutation file: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

void write_permutation_file(const std::filesystem::path& path, const PermutationSet& set) {
  write_text_file(path, format_permutation_set(set));
}

PermutationSet read_permutation_file(const std::filesystem::path& path) {
  return parse_permutation_set(read_text_file(path));
}

Digest digest_of(const PermutationSet& set) { return sha256(format_permutation_set(set)); }

}  // namespace vj
