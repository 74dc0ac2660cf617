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


#include "vjigsaw/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "vjigsaw/error.hpp"
#include "vjigsaw/perm_io.hpp"

namespace vj {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void patch_u32(std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    const auto* p = take(2);
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
  }
  std::uint32_t u32() {
    const auto* p = take(4);
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  const std::uint8_t* take(std::size_t n) {
    if (n > bytes_.size() - pos_) fail(ErrorKind::kFormat, "shard: unexpected end of data");
    const auto* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr std::size_t kHeaderSize = 4 + 2 + 1 + 1 + 4 + 4 * 2 + 32;

std::uint16_t narrow16(int v, const char* what) {
  if (v < 0 || v > 0xffff) fail(ErrorKind::kInvalidArgument, std::string("shard: ") + what + " out of range");
  return static_cast<std::uint16_t>(v);
}

void write_source(ByteWriter& w, const PatchSource& s) {
  w.u16(narrow16(s.frame, "frame"));
  w.u16(narrow16(s.cell_row, "cell row"));
  w.u16(narrow16(s.cell_col, "cell col"));
  w.u16(narrow16(s.jitter_y, "jitter"));
  w.u16(narrow16(s.jitter_x, "jitter"));
}

PatchSource read_source(ByteReader& r) {
  PatchSource s;
  s.frame = r.u16();
  s.cell_row = r.u16();
  s.cell_col = r.u16();
  s.jitter_y = r.u16();
  s.jitter_x = r.u16();
  return s;
}

template <typename Scalar>
std::vector<PuzzleRecordT<Scalar>> decode_records(ByteReader& r, const ShardHeader& h,
                                                  std::size_t payload_end) {
  std::vector<PuzzleRecordT<Scalar>> out;
  out.reserve(h.record_count);
  for (std::uint32_t i = 0; i < h.record_count; ++i) {
    const std::uint32_t body = r.u32();
    const std::size_t start = r.pos();
    if (body > payload_end - start) fail(ErrorKind::kFormat, "shard: record overruns file");
    PuzzleRecordT<Scalar> rec;
    const std::uint16_t id_len = r.u16();
    const auto* id = r.take(id_len);
    rec.tuple_id.assign(reinterpret_cast<const char*>(id), id_len);
    rec.label = static_cast<int>(r.u32());
    rec.perm_set_digest = h.perm_set_digest;
    for (std::uint16_t p = 0; p < h.patches_per_record; ++p) {
      Patch<Scalar> patch{Image<Scalar>(h.height, h.width, h.channels), read_source(r)};
      auto& data = patch.pixels.data();
      if constexpr (std::is_same_v<Scalar, std::uint8_t>) {
        const auto* px = r.take(static_cast<std::size_t>(data.size()));
        std::memcpy(data.data(), px, static_cast<std::size_t>(data.size()));
      } else {
        for (Eigen::Index k = 0; k < data.size(); ++k) data.data()[k] = r.f32();
      }
      rec.patches.push_back(std::move(patch));
    }
    if (r.pos() - start != body) fail(ErrorKind::kFormat, "shard: record length mismatch");
    out.push_back(std::move(rec));
  }
  if (r.pos() != payload_end) fail(ErrorKind::kFormat, "shard: trailing bytes after records");
  return out;
}

}  // namespace

std::string_view to_string(PixelEncoding e) {
  return e == PixelEncoding::kRaw8 ? "raw8" : "norm32";
}

PixelEncoding parse_encoding(std::string_view name) {
  if (name == "raw8") return PixelEncoding::kRaw8;
  if (name == "norm32") return PixelEncoding::kNorm32;
  fail(ErrorKind::kInvalidArgument, "encoding must be raw8 or norm32");
}

std::vector<std::uint8_t> encode_shard(std::span<const PuzzleRecord> records,
                                       PixelEncoding encoding) {
  require(!records.empty(), "write_shard: no records");
  const auto& first = records.front();
  require(!first.patches.empty(), "write_shard: record without patches");
  const auto& px0 = first.patches.front().pixels;
  for (const auto& rec : records) {
    require(rec.patches.size() == first.patches.size(),
            "write_shard: heterogeneous patch counts");
    require(rec.perm_set_digest == first.perm_set_digest,
            "write_shard: records bound to different permutation sets");
    require(rec.tuple_id.size() <= 0xffff, "write_shard: tuple id too long");
    require(rec.label >= 0, "write_shard: negative label");
    for (const auto& p : rec.patches) {
      require(p.pixels.height() == px0.height() && p.pixels.width() == px0.width() &&
                  p.pixels.channels() == px0.channels(),
              "write_shard: heterogeneous patch dimensions");
    }
  }

  ByteWriter w;
  w.bytes(kShardMagic, 4);
  w.u16(kShardVersion);
  w.u8(static_cast<std::uint8_t>(encoding));
  w.u8(1);
  w.u32(static_cast<std::uint32_t>(records.size()));
  w.u16(narrow16(px0.height(), "height"));
  w.u16(narrow16(px0.width(), "width"));
  w.u16(narrow16(px0.channels(), "channels"));
  w.u16(narrow16(static_cast<int>(first.patches.size()), "patch count"));
  w.bytes(first.perm_set_digest.data(), first.perm_set_digest.size());

  for (const auto& rec : records) {
    const std::size_t len_at = w.size();
    w.u32(0);
    w.u16(static_cast<std::uint16_t>(rec.tuple_id.size()));
    w.bytes(rec.tuple_id.data(), rec.tuple_id.size());
    w.u32(static_cast<std::uint32_t>(rec.label));
    for (const auto& p : rec.patches) {
      write_source(w, p.source);
      if (encoding == PixelEncoding::kRaw8) {
        w.bytes(p.pixels.data().data(), static_cast<std::size_t>(p.pixels.data().size()));
      } else {
        const NormPatch n = normalize_patch(p);
        const auto& d = n.pixels.data();
        for (Eigen::Index k = 0; k < d.size(); ++k) w.f32(d.data()[k]);
      }
    }
    w.patch_u32(len_at, static_cast<std::uint32_t>(w.size() - len_at - 4));
  }
  auto bytes = w.take();
  const std::uint32_t crc = crc32(bytes);
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  return bytes;
}

ShardData decode_shard(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kShardMagic, 4) != 0) {
    fail(ErrorKind::kFormat, "shard: bad magic");
  }
  if (bytes.size() < kHeaderSize + 4) fail(ErrorKind::kChecksum, "shard: truncated");
  const std::size_t payload_end = bytes.size() - 4;
  ByteReader tail(bytes.subspan(payload_end));
  if (tail.u32() != crc32(bytes.first(payload_end))) {
    fail(ErrorKind::kChecksum, "shard: checksum mismatch");
  }

  ByteReader r(bytes.first(payload_end));
  r.take(4);
  ShardData out;
  ShardHeader& h = out.header;
  h.version = r.u16();
  if (h.version != kShardVersion) {
    fail(ErrorKind::kUnsupportedVersion,
         "shard: unsupported version " + std::to_string(h.version));
  }
  const std::uint8_t enc = r.u8();
  if (enc > 1) fail(ErrorKind::kFormat, "shard: unknown pixel encoding");
  h.encoding = static_cast<PixelEncoding>(enc);
  h.byte_order = r.u8();
  if (h.byte_order != 1) fail(ErrorKind::kFormat, "shard: unsupported byte order");
  h.record_count = r.u32();
  h.height = r.u16();
  h.width = r.u16();
  h.channels = r.u16();
  h.patches_per_record = r.u16();
  std::memcpy(h.perm_set_digest.data(), r.take(32), 32);
  if (h.encoding == PixelEncoding::kRaw8) {
    out.records = decode_records<std::uint8_t>(r, h, payload_end);
  } else {
    out.records = decode_records<float>(r, h, payload_end);
  }
  return out;
}

ShardHeader write_shard(std::span<const PuzzleRecord> records, const std::filesystem::path& path,
                        PixelEncoding encoding) {
  const auto bytes = encode_shard(records, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open shard " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
  return decode_shard(bytes).header;
}

ShardData read_shard(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open shard " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_shard(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::size_t Manifest::built_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.built ? 1 : 0;
  return n;
}

std::size_t Manifest::skipped_count() const { return entries.size() - built_count(); }

bool operator==(const Manifest& a, const Manifest& b) {
  return format_manifest(a) == format_manifest(b);
}

std::string format_manifest(const Manifest& m) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = "vjz-manifest";
  j["version"] = 1;
  j["dataset_name"] = m.dataset_name;
  j["regime"] = m.regime;
  j["n_f"] = m.n_f;
  j["grid"] = {{"crop", m.grid.crop}, {"rows", m.grid.rows}, {"cols", m.grid.cols},
               {"patch", m.grid.patch}};
  j["encoding"] = m.encoding;
  j["perm_file"] = m.perm_file;
  j["perm_set_digest"] = m.perm_set_digest;
  j["seed"] = m.seed;
  j["epoch"] = m.epoch;
  j["gray_prob"] = m.gray_prob;
  j["gray_scope"] = m.gray_scope;
  j["tool_version"] = m.tool_version;
  j["created_utc"] = m.created_utc;
  j["flags"] = m.flags;
  j["counts"] = {{"tuples", m.entries.size()},
                 {"built", m.built_count()},
                 {"skipped", m.skipped_count()}};
  auto shards = ordered_json::array();
  for (const auto& s : m.shards) shards.push_back({{"file", s.file}, {"records", s.records}});
  j["shards"] = shards;
  auto entries = ordered_json::array();
  for (const auto& e : m.entries) {
    ordered_json je{{"tuple_id", e.tuple_id}, {"video_id", e.video_id}, {"frames", e.frames},
                    {"status", e.built ? "built" : "skipped"}};
    if (e.built) {
      je["shard"] = e.shard;
      je["label"] = e.label;
    } else {
      je["reason"] = e.reason;
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

Manifest parse_manifest(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "vjz-manifest") fail(ErrorKind::kFormat, "not a manifest");
    if (j.at("version") != 1) fail(ErrorKind::kUnsupportedVersion, "unsupported manifest version");
    Manifest m;
    m.dataset_name = j.at("dataset_name");
    m.regime = j.at("regime");
    m.n_f = j.at("n_f");
    const auto& g = j.at("grid");
    m.grid = GridSpec{g.at("crop"), g.at("rows"), g.at("cols"), g.at("patch")};
    m.encoding = j.at("encoding");
    m.perm_file = j.at("perm_file");
    m.perm_set_digest = j.at("perm_set_digest");
    m.seed = j.at("seed");
    m.epoch = j.at("epoch");
    m.gray_prob = j.at("gray_prob");
    m.gray_scope = j.at("gray_scope");
    m.tool_version = j.at("tool_version");
    m.created_utc = j.at("created_utc");
    m.flags = j.at("flags").get<std::map<std::string, std::string>>();
    for (const auto& s : j.at("shards")) m.shards.push_back({s.at("file"), s.at("records")});
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.tuple_id = je.at("tuple_id");
      e.video_id = je.at("video_id");
      e.frames = je.at("frames").get<std::vector<std::string>>();
      e.built = je.at("status") == "built";
      if (e.built) {
        e.shard = je.at("shard");
        e.label = je.at("label");
      } else {
        e.reason = je.at("reason");
      }
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  write_text_file(path, format_manifest(m));
}

Manifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path));
}

// ---------------------------------------------------------------------------

std::string format_report(const SamplerReport& report) {
  std::ostringstream out;
  out << "# h best_sum_distance candidates_evaluated\n";
  for (std::size_t i = 0; i < report.per_step_best_distance.size(); ++i) {
    out << i + 2 << ' ' << report.per_step_best_distance[i].num << ' '
        << report.per_step_candidates[i] << '\n';
  }
  out << "total_candidates " << report.candidates_evaluated << '\n';
  out << "wall_time_ns " << report.wall_time.count() << '\n';
  out << "peak_candidate_rows " << report.peak_candidate_memory_rows << '\n';
  return out.str();
}

SamplerReport parse_report(std::string_view text) {
  SamplerReport report;
  std::istringstream in{std::string(text)};
  std::string line;
  bool totals = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (!totals && std::isdigit(static_cast<unsigned char>(line[0]))) {
      std::int64_t h = 0, sum = 0;
      std::uint64_t cand = 0;
      if (!(fields >> h >> sum >> cand) || h != static_cast<std::int64_t>(report.per_step_best_distance.size()) + 2) {
        fail(ErrorKind::kFormat, "report: bad step line '" + line + "'");
      }
      report.per_step_best_distance.push_back(Rational{sum, h - 1});
      report.per_step_candidates.push_back(cand);
      continue;
    }
    totals = true;
    std::string key;
    std::int64_t value = 0;
    if (!(fields >> key >> value)) fail(ErrorKind::kFormat, "report: bad totals line '" + line + "'");
    if (key == "total_candidates") {
      report.candidates_evaluated = static_cast<std::uint64_t>(value);
    } else if (key == "wall_time_ns") {
      report.wall_time = std::chrono::nanoseconds(value);
    } else if (key == "peak_candidate_rows") {
      report.peak_candidate_memory_rows = static_cast<std::uint64_t>(value);
    } else {
      fail(ErrorKind::kFormat, "report: unknown key '" + key + "'");
    }
  }
  return report;
}

}  // namespace vj
