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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace vj {

// Splits [0, n) into `workers` contiguous ranges and runs fn(begin, end, w)
// for each on its own thread. The partition depends only on (n, workers);
// callers reduce per-worker results in worker order.
template <typename Fn>
void parallel_ranges(std::uint64_t n, int workers, Fn&& fn) {
  const auto w = static_cast<std::uint64_t>(std::max(1, workers));
  if (w == 1 || n < 2) {
    fn(std::uint64_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  const std::uint64_t step = n / w, extra = n % w;
  std::uint64_t begin = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t end = begin + step + (i < extra ? 1 : 0);
    threads.emplace_back([&, begin, end, i] {
      try {
        fn(begin, end, static_cast<int>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace vj
