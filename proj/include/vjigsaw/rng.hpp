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
#include <string_view>

namespace vj {

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Keys a substream by (seed, domain, id...). Every random decision in the
// library draws from a stream keyed this way, so results never depend on
// which worker handled which item or in what order.
class StreamKey {
 public:
  explicit constexpr StreamKey(std::uint64_t seed) : value_(mix64(seed)) {}

  StreamKey with(std::uint64_t v) const {
    StreamKey k = *this;
    k.value_ = mix64(k.value_ ^ mix64(v + 0x9e3779b97f4a7c15ULL));
    return k;
  }
  StreamKey with(std::string_view s) const {
    StreamKey k = *this;
    for (unsigned char c : s) k.value_ = mix64(k.value_ ^ (c + 0x100ULL));
    return k.with(static_cast<std::uint64_t>(s.size()));
  }

  std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_;
};

// Counter-based generator: output n is mix64(key + n * gamma).
class Rng {
 public:
  explicit Rng(StreamKey key) : key_(key.value()) {}

  std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform integer in [0, n). Rejection sampling keeps it exact.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace vj
