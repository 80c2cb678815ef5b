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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "gzfdp/channel.hpp"
#include "gzfdp/rng.hpp"
#include "gzfdp/types.hpp"

namespace gzfdp::test {

inline std::filesystem::path data_dir() { return GZFDP_TEST_DATA_DIR; }

inline ChannelMatrix example1() { return load_channel_fixture(data_dir() / "ex1.txt"); }

inline ChannelMatrix random_channel(Index n, Index m, std::uint64_t seed) {
  return gen_iid_gaussian(n, m, derive_stream(0x5eed, seed));
}

/// Random Hermitian positive-definite matrix A A^dagger + n I.
inline CMatrix random_pd(Index n, std::uint64_t seed) {
  const CMatrix a = random_channel(n, n, seed).entries;
  return a * a.adjoint() + static_cast<double>(n) * CMatrix::Identity(n, n);
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace gzfdp::test
