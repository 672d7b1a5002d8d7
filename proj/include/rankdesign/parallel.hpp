/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKDESIGN_PARALLEL_HPP_
#define RANKDESIGN_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rankdesign {

// Worker count from RANKDESIGN_WORKERS, falling back to hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("RANKDESIGN_WORKERS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, n) on a small pool; results keep input order.
// fn must not touch shared mutable state. The first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, std::size_t workers, const Fn& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_PARALLEL_HPP_
