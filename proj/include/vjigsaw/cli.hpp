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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vjigsaw/dataset_io.hpp"
#include "vjigsaw/image.hpp"
#include "vjigsaw/puzzle.hpp"
#include "vjigsaw/sampler.hpp"
#include "vjigsaw/tuples.hpp"

namespace vj::cli {

inline constexpr const char* kToolVersion = "vjigsaw 1.0.0";

enum ExitCode : int {
  kOk = 0,
  kGeneric = 1,
  kUsage = 2,
  kCapacity = 3,
  kFormat = 4,
  kVerification = 5,
  kTooManySkipped = 6,
};

int exit_code_for(ErrorKind kind);

struct PermsConfig {
  SamplerParams params;
  std::filesystem::path out;  // report goes to out + ".report"
  bool quiet = false;
};

struct StatsConfig {
  std::filesystem::path perm_file;
};

struct BuildConfig {
  std::filesystem::path tuples;
  std::filesystem::path frames_dir;
  std::filesystem::path perm_file;
  std::filesystem::path out;
  std::string dataset_name = "dataset";
  TupleRegime regime = TupleRegime::kQuadrupleExpand;
  std::vector<int> indices = {1, 5, 10};
  BuildOptions options;
  PixelEncoding encoding = PixelEncoding::kNorm32;
  std::size_t shard_size = 1000;
  double max_skip_fraction = 0.01;
  int workers = 1;
  bool debug_png = false;
  bool overwrite = false;
  std::map<std::string, std::string> flags;  // echoed into the manifest
};

struct VerifyConfig {
  std::filesystem::path out;
  std::optional<std::filesystem::path> perm_file;
};

struct BenchConfig {
  int count = 100;
  int n_p = 4;
  int n_f = 3;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  bool exact = false;
  std::uint64_t budget = 10'000'000;
  std::uint64_t pool_size = 100'000;
  int workers = 1;
  std::optional<std::filesystem::path> out;
};

struct BenchRow {
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::kSpatialCoherent;
  double wall_seconds = 0;
  std::uint64_t candidates_per_step = 0;
  std::uint64_t candidates_total = 0;
  std::uint64_t peak_rows = 0;
  int min_pairwise = 0;
  double mean_pairwise = 0;
};

int cmd_perms(const PermsConfig& cfg, std::ostream& out);
int cmd_stats(const StatsConfig& cfg, std::ostream& out);
int cmd_build(const BuildConfig& cfg, std::ostream& out);
int cmd_verify(const VerifyConfig& cfg, std::ostream& out);
std::vector<BenchRow> run_bench(const BenchConfig& cfg);
int cmd_bench(const BenchConfig& cfg, std::ostream& out);

// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vj::cli
