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

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "gzfdp/channel.hpp"
#include "gzfdp/types.hpp"

namespace gzfdp {

/// Index clamps of the band structure, 0-based: the lower end never goes
/// below the first user and the upper end never passes the last one.
constexpr Index clamp_down(Index n, Index nu) noexcept { return n - nu < 0 ? 0 : n - nu; }
constexpr Index clamp_up(Index n, Index nu, Index n_users) noexcept {
  return n + nu > n_users - 1 ? n_users - 1 : n + nu;
}

/// Condition-number limit on H H^dagger above which a channel is rejected.
inline constexpr double kMaxGramCondition = 1e12;

/// G = (H H^dagger)^{-1} together with the quantities the band precoder needs:
///
///   G_n^nu     principal block of G over users n .. clamp_up(n, nu)
///   g_n^nu     column of G below g_nn inside that block
///   ghat_n^nu  g_nn - (g_n^nu)^dagger (G_{n+1}^{nu-1})^{-1} g_n^nu
///
/// Instances are immutable. The per-depth level cache is filled lazily and
/// thread-safely; copies share it, `permuted` starts a fresh one.
class GramGeometry {
 public:
  /// Factorises H H^dagger and inverts it through the Cholesky factor.
  /// Throws RankError when the condition estimate exceeds kMaxGramCondition.
  static GramGeometry build(const ChannelMatrix& h, double noise_power);

  /// Wraps an explicit Hermitian positive-definite G (used for crafted
  /// geometries in tests and by `permuted`). Throws ParameterError if G is
  /// not Hermitian within 1e-10 ||G|| or not positive definite.
  GramGeometry(CMatrix gram, double noise_power);

  const CMatrix& gram() const noexcept { return gram_; }
  Index n_users() const noexcept { return gram_.rows(); }
  double noise_power() const noexcept { return noise_power_; }

  CMatrix principal_submatrix(Index n, Index nu) const;
  CVector border_vector(Index n, Index nu) const;

  /// (G_{n+1}^{nu-1})^{-1} g_n^nu, the direction of the off-diagonal part of
  /// column n of the effective channel. Empty at the lower boundary.
  CVector band_direction(Index n, Index nu) const;

  double schur_ghat(Index n, Index nu) const;

  /// ghat_n^nu for every user n at one depth; cached.
  const RVector& ghat_levels(Index nu) const;

  /// (ghat_n^0, ..., ghat_n^{N-1}); non-increasing.
  RVector ghat_chain(Index n) const;

  /// Determinant of G restricted to an arbitrary user set (order irrelevant).
  /// The empty set has determinant 1.
  double principal_det(std::span<const Index> users) const;

  /// Geometry of the reordered channel: row k of the new H is row perm[k] of
  /// the old one, so the new G is Q G Q^dagger.
  GramGeometry permuted(std::span<const Index> perm) const;

 private:
  struct LevelCache {
    explicit LevelCache(Index n);
    std::unique_ptr<std::once_flag[]> once;
    std::vector<RVector> levels;
  };

  void check_indices(Index n, Index nu) const;

  CMatrix gram_;
  double noise_power_;
  std::shared_ptr<LevelCache> cache_;
};

}  // namespace gzfdp
