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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vjigsaw/digest.hpp"
#include "vjigsaw/image.hpp"
#include "vjigsaw/puzzle.hpp"
#include "vjigsaw/sampler.hpp"

namespace vj {

// ---------------------------------------------------------------------------
// Puzzle shards
//
// Little-endian layout:
//   "VJZ1"                 4 bytes
//   version                u16 (kShardVersion)
//   encoding               u8  (0 raw8, 1 norm32)
//   byte order             u8  (1 = little endian)
//   record count           u32
//   height, width, channels, patches per record   u16 each
//   permutation digest     32 bytes
//   records, each:         u32 body length, then
//       u16 id length, id bytes, u32 label,
//       per patch: u16 frame, cell_row, cell_col, jitter_y, jitter_x,
//                  H*W*C pixels (u8, or IEEE-754 f32)
//   CRC-32 of every preceding byte   u32
// ---------------------------------------------------------------------------

inline constexpr char kShardMagic[4] = {'V', 'J', 'Z', '1'};
inline constexpr std::uint16_t kShardVersion = 1;

enum class PixelEncoding : std::uint8_t { kRaw8 = 0, kNorm32 = 1 };

std::string_view to_string(PixelEncoding e);
PixelEncoding parse_encoding(std::string_view name);

struct ShardHeader {
  std::uint16_t version = kShardVersion;
  PixelEncoding encoding = PixelEncoding::kRaw8;
  std::uint8_t byte_order = 1;
  std::uint32_t record_count = 0;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint16_t channels = 0;
  std::uint16_t patches_per_record = 0;
  Digest perm_set_digest{};

  friend bool operator==(const ShardHeader&, const ShardHeader&) = default;
};

using ShardRecords = std::variant<std::vector<PuzzleRecord>, std::vector<NormRecord>>;

struct ShardData {
  ShardHeader header;
  ShardRecords records;
};

// Serializes raw records; norm32 normalizes each patch on the way out.
std::vector<std::uint8_t> encode_shard(std::span<const PuzzleRecord> records,
                                       PixelEncoding encoding);
ShardData decode_shard(std::span<const std::uint8_t> bytes);

ShardHeader write_shard(std::span<const PuzzleRecord> records, const std::filesystem::path& path,
                        PixelEncoding encoding = PixelEncoding::kRaw8);
ShardData read_shard(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Tuple manifest (JSON)
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string tuple_id;
  std::string video_id;
  std::vector<std::string> frames;
  bool built = false;
  std::string reason;  // skip reason
  std::string shard;   // file name, built entries only
  int label = -1;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ManifestShard {
  std::string file;
  std::uint32_t records = 0;

  friend bool operator==(const ManifestShard&, const ManifestShard&) = default;
};

struct Manifest {
  std::string dataset_name;
  std::string regime;
  int n_f = 3;
  GridSpec grid;
  std::string encoding;
  std::string perm_file;
  std::string perm_set_digest;  // hex
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  double gray_prob = 0.5;
  std::string gray_scope;
  std::string tool_version;
  std::string created_utc;
  std::map<std::string, std::string> flags;
  std::vector<ManifestEntry> entries;
  std::vector<ManifestShard> shards;

  std::size_t built_count() const;
  std::size_t skipped_count() const;
};

bool operator==(const Manifest& a, const Manifest& b);

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(std::string_view text);
void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sampler report (text)
//   # h best_sum_distance candidates_evaluated
//   one line per greedy step h = 2..N, then `key value` totals
// ---------------------------------------------------------------------------

std::string format_report(const SamplerReport& report);
SamplerReport parse_report(std::string_view text);

}  // namespace vj
