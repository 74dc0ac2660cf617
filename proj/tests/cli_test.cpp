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
#include <sstream>

#include "test_support.hpp"
#include "vjigsaw/cli.hpp"
#include "vjigsaw/perm_io.hpp"

namespace vj {
namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vjigsaw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) { return read_text_file(p); }

// Frames dir with `videos` quadruple entries, all 240x260 PNGs.
std::filesystem::path make_dataset(const std::filesystem::path& root, int videos) {
  std::filesystem::create_directories(root / "frames");
  std::ofstream list(root / "tuples.txt");
  list << "# video frame frame frame frame\n";
  for (int v = 0; v < videos; ++v) {
    list << "video" << v;
    for (int f = 0; f < 4; ++f) {
      const std::string name = "v" + std::to_string(v) + "_" + std::to_string(f) + ".png";
      save_png(root / "frames" / name, testing::synthetic_image(240, 260, v * 10 + f));
      list << ' ' << name;
    }
    list << '\n';
  }
  return root / "tuples.txt";
}

TEST(CliPerms, WritesSetAndReport) {
  testing::TempDir dir("cli");
  const auto out = dir.path() / "perms.txt";
  const Result r = run_cli({"perms", "--mode", "sp", "--n", "100", "--np", "4", "--nf", "3",
                            "--seed", "1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const PermutationSet s = read_permutation_file(out);
  EXPECT_EQ(s.size(), 100);
  EXPECT_EQ(s.seed(), 1u);
  const SamplerReport rep = parse_report(slurp(out.string() + ".report"));
  EXPECT_EQ(rep.candidates_evaluated, 99u * 82944u);
  EXPECT_NE(r.out.find("total_candidates 8211456"), std::string::npos);
}

TEST(CliPerms, CapacityErrorReportsSpaceSize) {
  const Result r = run_cli({"perms", "--mode", "sp", "--n", "10", "--np", "2", "--nf", "2",
                            "--seed", "1"});
  EXPECT_EQ(r.code, cli::kCapacity);
  EXPECT_NE(r.err.find("space size 8"), std::string::npos) << r.err;
}

TEST(CliPerms, OrigExactDerangement) {
  const Result r =
      run_cli({"perms", "--mode", "orig", "--n", "2", "--len", "3", "--exact", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n2 3.0000 3 6\n"), std::string::npos) << r.out;
}

TEST(CliPerms, SeedIsRequiredAndFlagsValidated) {
  EXPECT_EQ(run_cli({"perms", "--n", "5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"perms", "--n", "5", "--seed", "1", "--workers", "0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"perms", "--n", "5", "--seed", "1", "--mode", "fancy"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(CliStats, SummarizesFile) {
  testing::TempDir dir("cli");
  const auto out = dir.path() / "p.txt";
  ASSERT_EQ(run_cli({"perms", "--n", "20", "--seed", "3", "--out", out.string()}).code, 0);
  const Result r = run_cli({"stats", "--perm-file", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("block_coherent_rows 20"), std::string::npos);
  EXPECT_NE(r.out.find("digest " + to_hex(digest_of(read_permutation_file(out)))),
            std::string::npos);
  EXPECT_EQ(run_cli({"stats", "--perm-file", (dir.path() / "none").string()}).code, cli::kFormat);
}

class CliBuild : public ::testing::Test {
 protected:
  void SetUp() override {
    tuples_ = make_dataset(dir_.path(), 5);
    perms_ = dir_.path() / "perms.txt";
    ASSERT_EQ(run_cli({"perms", "--n", "10", "--seed", "7", "--out", perms_.string()}).code, 0);
  }
  Result build(const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"build", "--tuples", tuples_.string(), "--frames-dir",
                                     (dir_.path() / "frames").string(), "--perm-file",
                                     perms_.string(), "--out", (dir_.path() / out).string(),
                                     "--seed", "11", "--shard-size", "7"};
    args.insert(args.end(), extra.begin(), extra.end());
    return run_cli(args);
  }
  std::filesystem::path path(const std::string& rel) const { return dir_.path() / rel; }

  testing::TempDir dir_{"build"};
  std::filesystem::path tuples_, perms_;
};

TEST_F(CliBuild, QuadruplesExpandAndVerify) {
  const Result r = build("out");
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const Manifest m = read_manifest(path("out/manifest.json"));
  EXPECT_EQ(m.entries.size(), 20u);
  EXPECT_EQ(m.built_count(), 20u);
  EXPECT_EQ(m.shards.size(), 3u);  // 7 + 7 + 6
  EXPECT_EQ(m.perm_set_digest, to_hex(digest_of(read_permutation_file(perms_))));
  EXPECT_EQ(m.flags.at("--seed"), "11");
  const Result v = run_cli({"verify", "--out", path("out").string()});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("verified 20 records in 3 shards, 0 failures"), std::string::npos);
}

TEST_F(CliBuild, RerunAndWorkerCountGiveIdenticalShards) {
  ASSERT_EQ(build("a").code, 0);
  ASSERT_EQ(build("b").code, 0);
  ASSERT_EQ(build("c", {"--workers", "3"}).code, 0);
  for (const char* shard : {"shard-00000.vjz", "shard-00001.vjz", "shard-00002.vjz"}) {
    const std::string a = slurp(path("a") / shard);
    EXPECT_EQ(a, slurp(path("b") / shard));
    EXPECT_EQ(a, slurp(path("c") / shard));
  }
}

TEST_F(CliBuild, CorruptFrameIsSkippedAndCounted) {
  std::ofstream(path("frames/v2_1.png"), std::ios::trunc) << "garbage";
  const Result strict = build("strict");
  EXPECT_EQ(strict.code, cli::kTooManySkipped);
  const Manifest m = read_manifest(path("strict/manifest.json"));
  EXPECT_EQ(m.skipped_count(), 3u);  // every triple containing frame 1 of video2
  EXPECT_EQ(m.built_count(), 17u);
  EXPECT_NE(strict.out.find("warning: skipped"), std::string::npos);
  const Result lax = build("lax", {"--max-skip-frac", "0.5"});
  EXPECT_EQ(lax.code, 0);
  EXPECT_EQ(run_cli({"verify", "--out", path("lax").string()}).code, 0);
}

TEST_F(CliBuild, StalePermutationDetected) {
  ASSERT_EQ(build("out").code, 0);
  const auto other = path("other.txt");
  ASSERT_EQ(run_cli({"perms", "--n", "10", "--seed", "8", "--out", other.string()}).code, 0);
  const Result v = run_cli({"verify", "--out", path("out").string(), "--perm-file", other.string()});
  EXPECT_EQ(v.code, cli::kVerification);
  std::filesystem::copy_file(other, perms_, std::filesystem::copy_options::overwrite_existing);
  EXPECT_EQ(build("out").code, cli::kVerification);
  EXPECT_EQ(build("out", {"--overwrite"}).code, 0);
  EXPECT_EQ(run_cli({"verify", "--out", path("out").string()}).code, 0);
}

TEST_F(CliBuild, TamperedShardFailsVerify) {
  ASSERT_EQ(build("out").code, 0);
  const auto shard = path("out/shard-00001.vjz");
  std::string bytes = slurp(shard);
  bytes[bytes.size() / 2] ^= 0x40;
  write_text_file(shard, bytes);
  EXPECT_EQ(run_cli({"verify", "--out", path("out").string()}).code, cli::kFormat);
}

TEST_F(CliBuild, MissingPermFileIsUsageError) {
  std::filesystem::remove(perms_);
  EXPECT_EQ(build("out").code, cli::kUsage);
}

TEST_F(CliBuild, FixedRegimeRawEncodingAndDebugPng) {
  const Result r = build("fixed", {"--regime", "fixed", "--indices", "1,2,4", "--encoding", "raw8",
                                   "--patch", "100", "--debug-png", "--gray-scope", "frame"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Manifest m = read_manifest(path("fixed/manifest.json"));
  EXPECT_EQ(m.built_count(), 5u);
  EXPECT_EQ(m.grid.patch, 100);
  EXPECT_EQ(m.encoding, "raw8");
  const ShardData d = read_shard(path("fixed/shard-00000.vjz"));
  EXPECT_EQ(d.header.height, 100);
  EXPECT_TRUE(std::holds_alternative<std::vector<PuzzleRecord>>(d.records));
  EXPECT_TRUE(std::filesystem::exists(path("fixed/debug/video0#000002/pos0.png")));
  EXPECT_EQ(run_cli({"verify", "--out", path("fixed").string()}).code, 0);
}

TEST_F(CliBuild, BadGeometryIsUsageError) {
  EXPECT_EQ(build("g", {"--grid", "3x3"}).code, cli::kUsage);
  EXPECT_EQ(build("g", {"--gray-prob", "2"}).code, cli::kUsage);
}

TEST(CliBench, TableShape) {
  testing::TempDir dir("bench");
  const auto out = dir.path() / "bench.txt";
  const Result r = run_cli({"bench", "--n", "5", "--seeds", "2", "--pool-size", "1000", "--out",
                            out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(slurp(out));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    rows += line.find("spatial_coherent") != std::string::npos ||
            line.find("unconstrained_pool") != std::string::npos;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_NE(r.out.find("spatial_space_per_step 82944"), std::string::npos);
  EXPECT_NE(r.out.find("unconstrained_space_per_step 479001600"), std::string::npos);
}

TEST(CliBench, ExactNeedsExplicitBudget) {
  EXPECT_EQ(run_cli({"bench", "--exact"}).code, cli::kUsage);
}

TEST(CliBinary, ExitCodeFromProcess) {
  const std::string cmd = std::string(VJIGSAW_CLI_PATH) + " perms --n 3 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), cli::kUsage);
}

}  // namespace
}  // namespace vj
