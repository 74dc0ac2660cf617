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


#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "test_support.hpp"
#include "vjigsaw/dataset_io.hpp"
#include "vjigsaw/perm_io.hpp"
#include "vjigsaw/sampler.hpp"

namespace vj {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidArgument;
}

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

// Records with random pixels, sources and labels; not tied to any real set.
std::vector<PuzzleRecord> random_records(std::mt19937_64& gen, int count, int side, int channels,
                                         int patches) {
  std::vector<PuzzleRecord> out;
  Digest d{};
  for (auto& b : d) b = static_cast<std::uint8_t>(gen());
  for (int i = 0; i < count; ++i) {
    PuzzleRecord r;
    r.tuple_id = "vid" + std::to_string(gen() % 1000) + "#" + std::to_string(i);
    r.label = static_cast<int>(gen() % 1000);
    r.perm_set_digest = d;
    for (int k = 0; k < patches; ++k) {
      RawPatch p{ImageU8(side, side, channels),
                 {static_cast<int>(gen() % 3), static_cast<int>(gen() % 2),
                  static_cast<int>(gen() % 2), static_cast<int>(gen() % 49),
                  static_cast<int>(gen() % 49)}};
      for (Eigen::Index j = 0; j < p.pixels.data().size(); ++j) {
        p.pixels.data().data()[j] = static_cast<std::uint8_t>(gen());
      }
      r.patches.push_back(std::move(p));
    }
    out.push_back(std::move(r));
  }
  return out;
}

template <typename A, typename B>
void expect_same_record(const A& a, const B& b) {
  EXPECT_EQ(a.tuple_id, b.tuple_id);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.perm_set_digest, b.perm_set_digest);
  ASSERT_EQ(a.patches.size(), b.patches.size());
  for (std::size_t k = 0; k < a.patches.size(); ++k) {
    EXPECT_EQ(a.patches[k].source, b.patches[k].source);
    EXPECT_TRUE(a.patches[k].pixels == b.patches[k].pixels);
  }
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(to_hex(sha256(std::string_view("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto check = bytes_of("123456789");
  EXPECT_EQ(crc32(check), 0xCBF43926u);
  const Digest d = sha256(std::string_view("x"));
  EXPECT_EQ(digest_from_hex(to_hex(d)), d);
  EXPECT_THROW(digest_from_hex("abc"), Error);
}

TEST(PermFile, FormatIsOneIndexedWithHeader) {
  PermMatrix m(2, 4);
  m << 1, 2, 3, 4, 4, 3, 2, 1;
  const PermutationSet s(m, 2, 2, SamplerMode::kSpatialCoherent, 42);
  EXPECT_EQ(format_permutation_set(s), "2 2 2 spatial_coherent 42\n1 2 3 4\n4 3 2 1\n");
  EXPECT_EQ(digest_of(s), sha256(format_permutation_set(s)));
}

TEST(PermFile, RoundTripProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SamplerParams p;
    p.n_p = 2 + static_cast<int>(seed % 3);
    p.count = std::min<int>(5 + static_cast<int>(seed), space_size_spatial(p.n_p, 2));
    p.n_f = 2;
    p.seed = seed * 1000003;
    const PermutationSet s = generate_sp(p).set;
    const std::string text = format_permutation_set(s);
    const PermutationSet back = parse_permutation_set(text);
    EXPECT_EQ(back, s);
    EXPECT_EQ(format_permutation_set(back), text);
  }
  testing::TempDir dir("perm");
  SamplerParams p;
  p.count = 10;
  const auto s = generate_sp(p).set;
  write_permutation_file(dir.path() / "l.txt", s);
  EXPECT_EQ(read_permutation_file(dir.path() / "l.txt"), s);
}

TEST(PermFile, MalformedInputIsFormatError) {
  const char* bad[] = {
      "",
      "2 2 1 spatial_coherent 1\n1 2 3 4",            // no trailing newline
      "2 2 2 spatial_coherent 1\n1 2 3 4\n",          // row count short
      "2 2 1 spatial_coherent 1\n1 2 3\n",            // row too short
      "2 2 1 sideways 1\n1 2 3 4\n",                  // bad mode
      "2 2 1 spatial_coherent 1\n1 2 3 x\n",          // not a number
      "2 2 2 spatial_coherent 1\n1 2 3 4\n1 2 3 4\n", // duplicate rows
      "2 2 1 spatial_coherent 1\n1 3 2 4\n",          // not coherent
      "2 2 1 spatial_coherent 1\r\n1 2 3 4\r\n",      // CRLF
  };
  for (const char* text : bad) {
    EXPECT_EQ(kind_of([&] { parse_permutation_set(text); }), ErrorKind::kFormat) << text;
  }
}

TEST(Shard, RawRoundTripHundredRecords) {
  std::mt19937_64 gen(1);
  const auto recs = random_records(gen, 100, 8, 3, 12);
  const auto bytes = encode_shard(recs, PixelEncoding::kRaw8);
  const ShardData back = decode_shard(bytes);
  EXPECT_EQ(back.header.record_count, 100u);
  EXPECT_EQ(back.header.height, 8);
  EXPECT_EQ(back.header.channels, 3);
  EXPECT_EQ(back.header.patches_per_record, 12);
  const auto& got = std::get<std::vector<PuzzleRecord>>(back.records);
  ASSERT_EQ(got.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) expect_same_record(got[i], recs[i]);
  EXPECT_EQ(encode_shard(got, PixelEncoding::kRaw8), bytes);
}

TEST(Shard, Norm32StoresNormalizedPatches) {
  std::mt19937_64 gen(2);
  const auto recs = random_records(gen, 10, 6, 3, 4);
  const ShardData back = decode_shard(encode_shard(recs, PixelEncoding::kNorm32));
  const auto& got = std::get<std::vector<NormRecord>>(back.records);
  ASSERT_EQ(got.size(), 10u);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    NormRecord expected{recs[i].tuple_id, {}, recs[i].label, recs[i].perm_set_digest};
    for (const auto& p : recs[i].patches) expected.patches.push_back(normalize_patch(p));
    expect_same_record(got[i], expected);
  }
}

TEST(Shard, FileRoundTripIsByteStable) {
  testing::TempDir dir("shard");
  std::mt19937_64 gen(3);
  const auto recs = random_records(gen, 20, 5, 1, 4);
  const ShardHeader h = write_shard(recs, dir.path() / "a.vjz", PixelEncoding::kRaw8);
  write_shard(recs, dir.path() / "b.vjz", PixelEncoding::kRaw8);
  EXPECT_EQ(read_text_file(dir.path() / "a.vjz"), read_text_file(dir.path() / "b.vjz"));
  EXPECT_EQ(read_shard(dir.path() / "a.vjz").header, h);
  EXPECT_EQ(kind_of([&] { read_shard(dir.path() / "missing.vjz"); }), ErrorKind::kIo);
}

TEST(Shard, WriterPreconditions) {
  std::mt19937_64 gen(4);
  EXPECT_EQ(kind_of([] { encode_shard({}, PixelEncoding::kRaw8); }), ErrorKind::kInvalidArgument);
  auto a = random_records(gen, 1, 8, 3, 4);
  auto b = random_records(gen, 1, 6, 3, 4);
  a.push_back(b.front());
  EXPECT_EQ(kind_of([&] { encode_shard(a, PixelEncoding::kRaw8); }), ErrorKind::kInvalidArgument);
}

TEST(Shard, TruncationIsChecksumError) {
  std::mt19937_64 gen(5);
  const auto bytes = encode_shard(random_records(gen, 3, 4, 3, 4), PixelEncoding::kRaw8);
  for (std::size_t keep : {std::size_t{4}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<long>(keep));
    EXPECT_EQ(kind_of([&] { decode_shard(cut); }), ErrorKind::kChecksum) << keep;
  }
}

TEST(Shard, MagicAndVersionErrors) {
  std::mt19937_64 gen(6);
  auto bytes = encode_shard(random_records(gen, 2, 4, 3, 4), PixelEncoding::kRaw8);
  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { decode_shard(wrong_magic); }), ErrorKind::kFormat);

  // Version 99 with a recomputed trailer so only the version is wrong.
  auto v99 = bytes;
  v99[4] = 99;
  v99[5] = 0;
  const std::uint32_t crc = crc32(std::span(v99).first(v99.size() - 4));
  for (int i = 0; i < 4; ++i) v99[v99.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
  EXPECT_EQ(kind_of([&] { decode_shard(v99); }), ErrorKind::kUnsupportedVersion);
}

TEST(Shard, EverySingleByteCorruptionDetected) {
  std::mt19937_64 gen(7);
  const auto bytes = encode_shard(random_records(gen, 2, 3, 3, 4), PixelEncoding::kRaw8);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    auto bad = bytes;
    bad[i] ^= static_cast<std::uint8_t>(1 + gen() % 255);
    const ErrorKind k = kind_of([&] { decode_shard(bad); });
    EXPECT_EQ(k, i < 4 ? ErrorKind::kFormat : ErrorKind::kChecksum) << i;
  }
}

Manifest sample_manifest() {
  Manifest m;
  m.dataset_name = "demo";
  m.regime = "quadruple_expand";
  m.grid = GridSpec::make(224, 2, 2, 80);
  m.encoding = "norm32";
  m.perm_file = "perms.txt";
  m.perm_set_digest = std::string(64, 'a');
  m.seed = 18446744073709551615ull;
  m.epoch = 3;
  m.gray_prob = 0.25;
  m.gray_scope = "frame";
  m.tool_version = "vjigsaw test";
  m.created_utc = "2026-01-01T00:00:00Z";
  m.flags = {{"--seed", "1"}, {"--grid", "2x2"}};
  m.entries.push_back({"v#000001.0", "v", {"a", "b", "c"}, true, "", "shard-00000.vjz", 7});
  m.entries.push_back({"w#000002", "w", {"x"}, false, "expected 4 frames, got 1", "", -1});
  m.shards.push_back({"shard-00000.vjz", 1});
  return m;
}

TEST(Manifest, RoundTrip) {
  const Manifest m = sample_manifest();
  const std::string text = format_manifest(m);
  const Manifest back = parse_manifest(text);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_EQ(back.shards, m.shards);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.built_count(), 1u);
  EXPECT_EQ(back.skipped_count(), 1u);
  testing::TempDir dir("manifest");
  write_manifest(dir.path() / "m.json", m);
  EXPECT_TRUE(read_manifest(dir.path() / "m.json") == m);
}

TEST(Manifest, MalformedIsFormatError) {
  EXPECT_EQ(kind_of([] { parse_manifest("{not json"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { parse_manifest("{}"); }), ErrorKind::kFormat);
}

TEST(Report, RoundTrip) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    SamplerReport r;
    const int steps = static_cast<int>(gen() % 50);
    for (int h = 2; h < steps + 2; ++h) {
      r.per_step_best_distance.push_back({static_cast<std::int64_t>(gen() % 10000), h - 1});
      r.per_step_candidates.push_back(gen() % 1000000);
      r.candidates_evaluated += r.per_step_candidates.back();
    }
    r.wall_time = std::chrono::nanoseconds(gen() % 1000000000);
    r.peak_candidate_memory_rows = gen() % 1000;
    const SamplerReport back = parse_report(format_report(r));
    EXPECT_EQ(back.per_step_candidates, r.per_step_candidates);
    ASSERT_EQ(back.per_step_best_distance.size(), r.per_step_best_distance.size());
    for (std::size_t i = 0; i < r.per_step_best_distance.size(); ++i) {
      EXPECT_EQ(back.per_step_best_distance[i].num, r.per_step_best_distance[i].num);
      EXPECT_EQ(back.per_step_best_distance[i].den, r.per_step_best_distance[i].den);
    }
    EXPECT_EQ(back.candidates_evaluated, r.candidates_evaluated);
    EXPECT_EQ(back.wall_time, r.wall_time);
    EXPECT_EQ(back.peak_candidate_memory_rows, r.peak_candidate_memory_rows);
    EXPECT_EQ(format_report(back), format_report(r));
  }
}

}  // namespace
}  // namespace vj
