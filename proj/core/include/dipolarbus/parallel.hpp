// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dipolarbus {

/// Hardware parallelism, at least 1.
inline int default_workers() noexcept {
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Items are claimed
/// dynamically but each index writes only its own output slot, so results
/// never depend on scheduling. After all items finish, the exception thrown by
/// the lowest failing index (if any) is rethrown.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  auto run = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::atomic<std::size_t> next{0};
  if (threads <= 1) {
    run(next);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back([&] { run(next); });
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dipolarbus
