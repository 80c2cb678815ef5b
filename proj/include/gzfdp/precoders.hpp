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

#include <string>

#include "gzfdp/channel.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/types.hpp"

namespace gzfdp {

enum class Objective { SumRate, MinRate };

const char* to_string(Objective o) noexcept;

/// Precoder family with its structural parameter: the interfering depth nu
/// for GzfDp, the group size N_g for UgDp, unused otherwise.
struct Family {
  enum class Kind { Zf, GzfDp, ZfDp, UgDp };
  Kind kind = Kind::Zf;
  Index param = 0;

  static Family zf() { return {Kind::Zf, 0}; }
  static Family gzfdp(Index nu) { return {Kind::GzfDp, nu}; }
  static Family zfdp() { return {Kind::ZfDp, 0}; }
  static Family ugdp(Index group_size) { return {Kind::UgDp, group_size}; }

  std::string label() const;
  friend bool operator==(const Family&, const Family&) = default;
};

/// Precoder P (M x N), effective channel F = H P (N x N) and the resulting
/// power allocation and rates. Rates are in bits per channel use.
struct PrecoderSolution {
  CMatrix precoder;
  CMatrix effective;
  Family family;
  Objective objective = Objective::SumRate;
  RVector diag_gains;    // f_nn >= 0
  RVector user_rates;
  double sum_rate = 0.0;
  double min_rate = 0.0;
  RVector water_levels;  // one level in sum-rate mode, one per user in min-rate mode
  double total_power = 0.0;

  double objective_value() const {
    return objective == Objective::SumRate ? sum_rate : min_rate;
  }
};

/// Linear zero-forcing: diagonal F, water-filling over g_nn.
PrecoderSolution build_zf(const ChannelMatrix& h, const GramGeometry& gram, double power_budget,
                          double noise_power);

/// Band lower-triangular F of depth nu maximising the sum rate: water-filling
/// over the Schur levels ghat_n^nu, off-diagonals -f_nn (G_{n+1}^{nu-1})^{-1} g_n^nu.
/// nu = 0 goes through the same code as build_zf and matches it bit for bit.
PrecoderSolution build_gzfdp_sumrate(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                                     double power_budget, double noise_power);

/// Same band structure, all users at the common rate
/// log2(1 + P_T / (N0 sum_n ghat_n^nu)).
PrecoderSolution build_gzfdp_minrate(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                                     double power_budget, double noise_power);

/// Full successive dirty-paper precoder from H = R U (R lower triangular with
/// non-negative real diagonal, U with orthonormal rows); P = U^dagger B.
PrecoderSolution build_zfdp(const ChannelMatrix& h, double power_budget, double noise_power,
                            Objective objective = Objective::SumRate);

/// User-grouping dirty-paper precoder: consecutive groups of `group_size`
/// users, inter-group interference projected out, triangular within a group.
PrecoderSolution build_ugdp(const ChannelMatrix& h, Index group_size, double power_budget,
                            double noise_power, Objective objective = Objective::SumRate);

/// Dispatches on family and objective. `gram` must belong to `h`.
PrecoderSolution build_precoder(const ChannelMatrix& h, const GramGeometry& gram,
                                const Family& family, Objective objective, double power_budget,
                                double noise_power);

/// Objective value of the band precoder computed from its levels alone,
/// without forming P or F. Used by the ordering searches.
double band_objective(const RVector& levels, Objective objective, double power_budget,
                      double noise_power);

/// H = R U with R lower triangular (non-negative real diagonal) and U having
/// orthonormal rows.
struct LqFactors {
  CMatrix r;
  CMatrix u;
};
LqFactors lq_decompose(const CMatrix& a);

/// Re Tr(F^dagger G F).
double power_trace(const CMatrix& f, const CMatrix& g);

}  // namespace gzfdp
