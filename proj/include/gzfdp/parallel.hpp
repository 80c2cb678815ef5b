// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The gzfdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#include "gzfdp/types.hpp"

namespace gzfdp {

/// How data-parallel kernels execute. Serial is the reference path the tests
/// compare the OpenMP path against; both produce identical results.
enum class Exec { Serial, Parallel };

/// Number of OpenMP threads the parallel path would use.
int parallel_threads();

/// Collects the first exception thrown inside an OpenMP region so it can be
/// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <typename Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

/// n! for n <= 20.
std::uint64_t factorial(int n);

/// The k-th permutation of {0, ..., n-1} in lexicographic order.
std::vector<Index> kth_permutation(int n, std::uint64_t k);

}  // namespace gzfdp
