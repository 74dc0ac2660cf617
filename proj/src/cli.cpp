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


#include "vjigsaw/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "vjigsaw/combinatorics.hpp"
#include "vjigsaw/dataset_io.hpp"
#include "vjigsaw/parallel.hpp"
#include "vjigsaw/perm_io.hpp"

namespace vj::cli {
namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string shard_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "shard-%05zu.vjz", index);
  return buf;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

GridSpec parse_grid(const std::string& text, int crop, int patch) {
  const auto x = text.find('x');
  require(x != std::string::npos, "--grid must look like ROWSxCOLS");
  return GridSpec::make(crop, std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1)), patch);
}

SamplerMode mode_from_flag(const std::string& mode, bool exact) {
  if (mode == "sp" || mode == "spatial" || mode == "spatial_coherent") {
    return SamplerMode::kSpatialCoherent;
  }
  if (mode == "orig" || mode == "unconstrained") {
    return exact ? SamplerMode::kUnconstrainedExact : SamplerMode::kUnconstrainedPool;
  }
  if (mode == "unconstrained_exact") return SamplerMode::kUnconstrainedExact;
  if (mode == "unconstrained_pool") return SamplerMode::kUnconstrainedPool;
  fail(ErrorKind::kInvalidArgument, "--mode must be sp or orig");
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return kUsage;
    case ErrorKind::kCapacity: return kCapacity;
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kChecksum:
    case ErrorKind::kUnsupportedVersion: return kFormat;
    case ErrorKind::kStalePermutation: return kVerification;
  }
  return kGeneric;
}

int cmd_perms(const PermsConfig& cfg, std::ostream& out) {
  const auto& p = cfg.params;
  SampleResult result = [&] {
    try {
      return generate(p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kCapacity) throw;
      std::string size;
      try {
        size = p.mode == SamplerMode::kSpatialCoherent
                   ? std::to_string(space_size_spatial(p.n_p, p.n_f))
                   : std::to_string(space_size_unconstrained(p.length()));
      } catch (const Error&) {
        size = "overflow";
      }
      throw Error(ErrorKind::kCapacity, std::string(e.what()) + " [space size " + size + "]");
    }
  }();
  const auto& rep = result.report;
  if (!cfg.quiet) {
    out << "# step best_mean_distance best_sum candidates\n";
    for (std::size_t i = 0; i < rep.per_step_best_distance.size(); ++i) {
      const auto& d = rep.per_step_best_distance[i];
      out << i + 2 << ' ' << fixed(d.value(), 4) << ' ' << d.num << ' '
          << rep.per_step_candidates[i] << '\n';
    }
  }
  out << "rows " << result.set.size() << " mode " << to_string(p.mode) << " seed " << p.seed
      << '\n';
  out << "total_candidates " << rep.candidates_evaluated << '\n';
  out << "wall_time_s " << fixed(std::chrono::duration<double>(rep.wall_time).count(), 6) << '\n';
  out << "peak_candidate_rows " << rep.peak_candidate_memory_rows << '\n';
  if (!cfg.out.empty()) {
    write_permutation_file(cfg.out, result.set);
    write_text_file(cfg.out.string() + ".report", format_report(rep));
    out << "wrote " << cfg.out.string() << " digest " << to_hex(digest_of(result.set)) << '\n';
  }
  return kOk;
}

int cmd_stats(const StatsConfig& cfg, std::ostream& out) {
  const PermutationSet set = read_permutation_file(cfg.perm_file);
  out << "rows " << set.size() << " length " << set.length() << " n_p " << set.n_p() << " n_f "
      << set.n_f() << " mode " << to_string(set.mode()) << " seed " << set.seed() << '\n';
  out << "digest " << to_hex(digest_of(set)) << '\n';
  int coherent = 0;
  for (int i = 0; i < set.size(); ++i) {
    coherent += is_block_coherent(set.row(i), set.n_p(), set.n_f()) ? 1 : 0;
  }
  out << "block_coherent_rows " << coherent << '\n';
  if (set.size() >= 2) {
    const DiversityStats d = diversity(set);
    out << "min_pairwise " << d.min_pairwise << '\n';
    out << "mean_pairwise " << fixed(d.mean_pairwise.value(), 6) << " (" << d.mean_pairwise.num
        << '/' << d.mean_pairwise.den << ")\n";
    out << "histogram";
    for (std::size_t k = 0; k < d.histogram.size(); ++k) out << ' ' << k << ':' << d.histogram[k];
    out << '\n';
  }
  return kOk;
}

int cmd_build(const BuildConfig& cfg, std::ostream& out) {
  namespace fs = std::filesystem;
  if (cfg.perm_file.empty() || !fs::exists(cfg.perm_file)) {
    fail(ErrorKind::kInvalidArgument, "permutation file '" + cfg.perm_file.string() +
                                          "' not found (--perm-file)");
  }
  require(cfg.shard_size >= 1, "--shard-size must be >= 1");
  require(cfg.workers >= 1, "--workers must be >= 1");
  const PermutationSet set = read_permutation_file(cfg.perm_file);
  const Digest digest = digest_of(set);

  fs::create_directories(cfg.out);
  const fs::path manifest_path = cfg.out / "manifest.json";
  if (fs::exists(manifest_path) && !cfg.overwrite) {
    const Manifest old = read_manifest(manifest_path);
    if (old.perm_set_digest != to_hex(digest)) {
      fail(ErrorKind::kStalePermutation,
           "output directory holds shards built against permutation set " +
               old.perm_set_digest + "; pass --overwrite to replace them");
    }
  }

  const auto entries = read_tuple_list(cfg.tuples);
  TupleExpansion expansion = expand_entries(entries, cfg.regime, cfg.indices);
  auto& tuples = expansion.tuples;
  std::sort(tuples.begin(), tuples.end(),
            [](const FrameTuple& a, const FrameTuple& b) { return a.tuple_id < b.tuple_id; });

  const FrameLoader loader = [&](const FrameRef& ref) { return load_image(cfg.frames_dir / ref.path); };
  std::vector<BuildOutcome> outcomes(tuples.size());
  parallel_ranges(tuples.size(), cfg.workers, [&](std::uint64_t begin, std::uint64_t end, int) {
    for (std::uint64_t i = begin; i < end; ++i) {
      outcomes[i] = build_record(tuples[i], set, digest, cfg.options, loader);
    }
  });

  Manifest m;
  m.dataset_name = cfg.dataset_name;
  m.regime = std::string(to_string(cfg.regime));
  m.n_f = set.n_f();
  m.grid = cfg.options.grid;
  m.encoding = std::string(to_string(cfg.encoding));
  m.perm_file = cfg.perm_file.string();
  m.perm_set_digest = to_hex(digest);
  m.seed = cfg.options.seed;
  m.epoch = cfg.options.epoch;
  m.gray_prob = cfg.options.gray_prob;
  m.gray_scope = std::string(to_string(cfg.options.gray_scope));
  m.tool_version = kToolVersion;
  m.created_utc = utc_now();
  m.flags = cfg.flags;

  // Remove shards from an earlier run so the directory matches the manifest.
  for (const auto& entry : fs::directory_iterator(cfg.out)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("shard-", 0) == 0 && entry.path().extension() == ".vjz") fs::remove(entry.path());
  }

  std::vector<PuzzleRecord> records;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ManifestEntry e;
    e.tuple_id = tuples[i].tuple_id;
    e.video_id = tuples[i].video_id;
    for (const auto& f : tuples[i].frames) e.frames.push_back(f.path);
    if (outcomes[i].record) {
      e.built = true;
      e.label = outcomes[i].record->label;
      records.push_back(std::move(*outcomes[i].record));
    } else {
      e.reason = outcomes[i].skip_reason;
    }
    m.entries.push_back(std::move(e));
  }
  for (auto& s : expansion.skipped) {
    m.entries.push_back(ManifestEntry{s.tuple_id, s.video_id, s.frames, false, s.reason, "", -1});
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.tuple_id < b.tuple_id; });
  std::map<std::string, std::size_t> entry_by_id;
  for (std::size_t i = 0; i < m.entries.size(); ++i) entry_by_id[m.entries[i].tuple_id] = i;

  for (std::size_t begin = 0; begin < records.size(); begin += cfg.shard_size) {
    const std::size_t end = std::min(records.size(), begin + cfg.shard_size);
    const std::string name = shard_name(m.shards.size());
    write_shard(std::span<const PuzzleRecord>(records.data() + begin, end - begin), cfg.out / name,
                cfg.encoding);
    m.shards.push_back({name, static_cast<std::uint32_t>(end - begin)});
    for (std::size_t r = begin; r < end; ++r) m.entries[entry_by_id[records[r].tuple_id]].shard = name;
  }

  if (cfg.debug_png) {
    const fs::path debug = cfg.out / "debug";
    for (const auto& rec : records) {
      const fs::path dir = debug / rec.tuple_id;
      fs::create_directories(dir);
      for (std::size_t k = 0; k < rec.patches.size(); ++k) {
        save_png(dir / ("pos" + std::to_string(k) + ".png"), rec.patches[k].pixels);
      }
    }
  }

  write_manifest(manifest_path, m);
  const std::size_t total = m.entries.size();
  const std::size_t skipped = m.skipped_count();
  out << "tuples " << total << " built " << records.size() << " skipped " << skipped << " shards "
      << m.shards.size() << '\n';
  for (const auto& e : m.entries) {
    if (!e.built) out << "warning: skipped " << e.tuple_id << ": " << e.reason << '\n';
  }
  if (total > 0 && static_cast<double>(skipped) > cfg.max_skip_fraction * static_cast<double>(total)) {
    out << "error: skipped fraction " << fixed(static_cast<double>(skipped) / total, 4)
        << " exceeds " << cfg.max_skip_fraction << '\n';
    return kTooManySkipped;
  }
  return kOk;
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out) {
  const Manifest m = read_manifest(cfg.out / "manifest.json");
  const std::filesystem::path perm_path = cfg.perm_file ? *cfg.perm_file : std::filesystem::path(m.perm_file);
  const PermutationSet set = read_permutation_file(perm_path);
  const Digest digest = digest_of(set);
  if (m.perm_set_digest != to_hex(digest)) {
    fail(ErrorKind::kStalePermutation, "manifest was built against permutation set " +
                                           m.perm_set_digest + ", " + perm_path.string() +
                                           " has digest " + to_hex(digest));
  }

  std::map<std::string, const ManifestEntry*> built;
  for (const auto& e : m.entries) {
    if (e.built) built[e.tuple_id] = &e;
  }
  std::set<std::string> seen;
  std::size_t checked = 0, failed = 0;
  auto check = [&](const auto& rec, const std::string& shard) {
    ++checked;
    bool ok = verify_record(rec, set, digest);
    const auto it = built.find(rec.tuple_id);
    if (it == built.end() || it->second->shard != shard || it->second->label != rec.label ||
        !seen.insert(rec.tuple_id).second) {
      ok = false;
    }
    if (!ok) {
      ++failed;
      out << "FAIL " << shard << ' ' << rec.tuple_id << '\n';
    }
  };
  for (const auto& s : m.shards) {
    const ShardData data = read_shard(cfg.out / s.file);
    if (data.header.perm_set_digest != digest) {
      fail(ErrorKind::kStalePermutation, s.file + " is bound to permutation set " +
                                             to_hex(data.header.perm_set_digest));
    }
    if (data.header.record_count != s.records) {
      out << "FAIL " << s.file << ": manifest lists " << s.records << " records, shard holds "
          << data.header.record_count << '\n';
      ++failed;
    }
    std::visit([&](const auto& recs) { for (const auto& r : recs) check(r, s.file); }, data.records);
  }
  if (seen.size() != built.size()) {
    out << "FAIL " << built.size() - seen.size() << " built tuples missing from shards\n";
    ++failed;
  }
  out << "verified " << checked << " records in " << m.shards.size() << " shards, " << failed
      << " failures\n";
  return failed == 0 ? kOk : kVerification;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::uint64_t seed : cfg.seeds) {
    for (bool spatial : {true, false}) {
      SamplerParams p;
      p.count = cfg.count;
      p.n_p = cfg.n_p;
      p.n_f = cfg.n_f;
      p.seed = seed;
      p.workers = cfg.workers;
      p.budget = cfg.budget;
      p.pool_size = cfg.pool_size;
      p.mode = spatial ? SamplerMode::kSpatialCoherent
                       : (cfg.exact ? SamplerMode::kUnconstrainedExact
                                    : SamplerMode::kUnconstrainedPool);
      const SampleResult r = generate(p);
      BenchRow row;
      row.seed = seed;
      row.mode = p.mode;
      row.wall_seconds = std::chrono::duration<double>(r.report.wall_time).count();
      row.candidates_per_step =
          r.report.per_step_candidates.empty() ? 0 : r.report.per_step_candidates.front();
      row.candidates_total = r.report.candidates_evaluated;
      row.peak_rows = r.report.peak_candidate_memory_rows;
      if (r.set.size() >= 2) {
        const DiversityStats d = diversity(r.set);
        row.min_pairwise = d.min_pairwise;
        row.mean_pairwise = d.mean_pairwise.value();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out) {
  const auto rows = run_bench(cfg);
  std::ostringstream table;
  table << "seed mode wall_s candidates_per_step candidates_total peak_rows min_pairwise "
           "mean_pairwise\n";
  for (const auto& r : rows) {
    table << r.seed << ' ' << to_string(r.mode) << ' ' << fixed(r.wall_seconds, 6) << ' '
          << r.candidates_per_step << ' ' << r.candidates_total << ' ' << r.peak_rows << ' '
          << r.min_pairwise << ' ' << fixed(r.mean_pairwise, 4) << '\n';
  }
  const std::uint64_t sp_space = space_size_spatial(cfg.n_p, cfg.n_f);
  table << "spatial_space_per_step " << sp_space << '\n';
  try {
    const std::uint64_t full = space_size_unconstrained(cfg.n_p * cfg.n_f);
    table << "unconstrained_space_per_step " << full << '\n';
    table << "space_ratio " << full / sp_space;
    if (full % sp_space != 0) table << " + " << full % sp_space << '/' << sp_space;
    table << '\n';
  } catch (const Error&) {
    table << "unconstrained_space_per_step overflow\n";
  }
  out << table.str();
  if (cfg.out) write_text_file(*cfg.out, table.str());
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video jigsaw puzzle generation: permutation sets, puzzle shards, benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // perms
  PermsConfig perms;
  std::string perms_mode = "sp";
  bool perms_exact = false;
  int perms_len = 0;
  auto* perms_cmd = app.add_subcommand("perms", "Generate a permutation set");
  perms_cmd->add_option("--mode", perms_mode, "sp (spatially coherent) or orig (unconstrained)")
      ->check(CLI::IsMember({"sp", "orig"}));
  perms_cmd->add_option("--n", perms.params.count, "Number of permutations N")
      ->check(CLI::PositiveNumber);
  perms_cmd->add_option("--np", perms.params.n_p, "Patches per frame");
  perms_cmd->add_option("--nf", perms.params.n_f, "Frames per tuple");
  perms_cmd->add_option("--len", perms_len, "orig mode: permutation length (sets np=len, nf=1)");
  perms_cmd->add_option("--seed", perms.params.seed, "64-bit seed")->required();
  perms_cmd->add_option("--pool-size", perms.params.pool_size, "orig pool mode: candidate pool");
  perms_cmd->add_flag("--exact", perms_exact, "orig mode: exact enumeration");
  perms_cmd->add_option("--budget", perms.params.budget, "exact mode: candidates per step limit");
  perms_cmd->add_option("--workers", perms.params.workers)->check(CLI::PositiveNumber);
  perms_cmd->add_option("--out", perms.out, "Permutation file to write (report at <out>.report)");
  perms_cmd->add_flag("--quiet", perms.quiet, "Only print totals");

  // stats
  StatsConfig stats;
  auto* stats_cmd = app.add_subcommand("stats", "Diversity statistics of a permutation file");
  stats_cmd->add_option("--perm-file", stats.perm_file)->required();

  // build
  BuildConfig build;
  std::string grid = "2x2", gray_scope = "tuple", regime = "quadruple", encoding = "norm32";
  int crop = 224, patch = 64;
  std::string indices = "1,5,10";
  auto* build_cmd = app.add_subcommand("build", "Build puzzle shards from frame tuples");
  build_cmd->add_option("--tuples", build.tuples, "Tuple list file")->required();
  build_cmd->add_option("--frames-dir", build.frames_dir, "Root of frame paths")->required();
  build_cmd->add_option("--perm-file", build.perm_file, "Permutation file");
  build_cmd->add_option("--out", build.out, "Output directory")->required();
  build_cmd->add_option("--seed", build.options.seed)->required();
  build_cmd->add_option("--crop", crop);
  build_cmd->add_option("--grid", grid, "ROWSxCOLS");
  build_cmd->add_option("--patch", patch);
  build_cmd->add_option("--gray-prob", build.options.gray_prob)->check(CLI::Range(0.0, 1.0));
  build_cmd->add_option("--gray-scope", gray_scope)->check(CLI::IsMember({"tuple", "frame"}));
  build_cmd->add_option("--regime", regime)->check(CLI::IsMember({"quadruple", "fixed"}));
  build_cmd->add_option("--indices", indices, "fixed regime: 1-based frame indices");
  build_cmd->add_option("--encoding", encoding)->check(CLI::IsMember({"raw8", "norm32"}));
  build_cmd->add_option("--shard-size", build.shard_size);
  build_cmd->add_option("--max-skip-frac", build.max_skip_fraction);
  build_cmd->add_option("--workers", build.workers)->check(CLI::PositiveNumber);
  build_cmd->add_option("--epoch", build.options.epoch, "Label-stream salt");
  build_cmd->add_option("--name", build.dataset_name);
  build_cmd->add_flag("--center-crop", build.options.center_crop);
  build_cmd->add_flag("--debug-png", build.debug_png, "Also write raw patches as PNG");
  build_cmd->add_flag("--overwrite", build.overwrite);

  // verify
  VerifyConfig verify;
  std::string verify_perm;
  auto* verify_cmd = app.add_subcommand("verify", "Verify shards against the permutation file");
  verify_cmd->add_option("--out", verify.out, "Build output directory")->required();
  verify_cmd->add_option("--perm-file", verify_perm);

  // bench
  BenchConfig bench;
  int seed_count = 3;
  std::uint64_t seed_base = 1;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Compare spatial and unconstrained samplers");
  bench_cmd->add_option("--n", bench.count)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--np", bench.n_p);
  bench_cmd->add_option("--nf", bench.n_f);
  bench_cmd->add_option("--seed", seed_base, "First seed");
  bench_cmd->add_option("--seeds", seed_count, "Number of seeds")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--exact", bench.exact);
  bench_cmd->add_option("--budget", bench.budget);
  bench_cmd->add_option("--pool-size", bench.pool_size);
  bench_cmd->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*perms_cmd) {
      perms.params.mode = mode_from_flag(perms_mode, perms_exact);
      if (perms_len > 0) {
        require(perms.params.mode != SamplerMode::kSpatialCoherent, "--len applies to orig mode");
        perms.params.n_p = perms_len;
        perms.params.n_f = 1;
      }
      if (perms.params.mode == SamplerMode::kUnconstrainedPool && perms.params.pool_size == 0) {
        perms.params.pool_size = 100'000;
      }
      return cmd_perms(perms, out);
    }
    if (*stats_cmd) return cmd_stats(stats, out);
    if (*build_cmd) {
      build.options.grid = parse_grid(grid, crop, patch);
      build.options.gray_scope = parse_gray_scope(gray_scope);
      build.regime = parse_regime(regime);
      build.encoding = parse_encoding(encoding);
      build.indices.clear();
      std::stringstream ss(indices);
      for (std::string tok; std::getline(ss, tok, ',');) build.indices.push_back(std::stoi(tok));
      for (const auto* opt : build_cmd->get_options()) {
        if (opt->count() > 0 && !opt->get_name().empty() && opt->get_name() != "--help") {
          build.flags[opt->get_name()] = opt->as<std::string>();
        }
      }
      return cmd_build(build, out);
    }
    if (*verify_cmd) {
      if (!verify_perm.empty()) verify.perm_file = verify_perm;
      return cmd_verify(verify, out);
    }
    if (*bench_cmd) {
      if (bench.exact && !bench_cmd->count("--budget")) {
        fail(ErrorKind::kInvalidArgument, "bench --exact requires an explicit --budget");
      }
      bench.seeds.clear();
      for (int i = 0; i < seed_count; ++i) bench.seeds.push_back(seed_base + i);
      if (!bench_out.empty()) bench.out = bench_out;
      return cmd_bench(bench, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kGeneric;
  }
  return kUsage;
}

}  // namespace vj::cli
