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

#include "gzfdp/precoders.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"
#include "gzfdp/waterfill.hpp"

namespace gzfdp {

const char* to_string(Objective o) noexcept {
  return o == Objective::SumRate ? "sum" : "min";
}

std::string Family::label() const {
  switch (kind) {
    case Kind::Zf: return "zf";
    case Kind::GzfDp: return fmt::format("gzfdp[nu={}]", param);
    case Kind::ZfDp: return "zfdp";
    case Kind::UgDp: return fmt::format("ugdp[ng={}]", param);
  }
  return "unknown";
}

double power_trace(const CMatrix& f, const CMatrix& g) {
  return (f.adjoint() * g * f).trace().real();
}

namespace {

void check_budget(double power_budget, double noise_power) {
  if (!(power_budget > 0.0) || !std::isfinite(power_budget)) {
    throw ParameterError(
        fmt::format("power budget must be positive and finite (got {})", power_budget));
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw ParameterError(fmt::format("noise power must be positive (got {})", noise_power));
  }
}

void check_depth(const GramGeometry& gram, Index nu) {
  if (nu < 0 || nu > gram.n_users() - 1) {
    throw ParameterError(
        fmt::format("interfering depth {} outside [0, {}]", nu, gram.n_users() - 1));
  }
}

void finish_rates(PrecoderSolution& s) {
  s.sum_rate = s.user_rates.sum();
  s.min_rate = s.user_rates.minCoeff();
}

// Fills F column by column from the diagonal gains and returns P = H^dagger (H H^dagger)^{-1} F.
PrecoderSolution assemble_band(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                               const RVector& diag) {
  const Index n_users = gram.n_users();
  PrecoderSolution s;
  s.effective = CMatrix::Zero(n_users, n_users);
  for (Index n = 0; n < n_users; ++n) {
    s.effective(n, n) = diag(n);
    const CVector dir = gram.band_direction(n, nu);
    if (dir.size() > 0 && diag(n) != 0.0) {
      s.effective.block(n + 1, n, dir.size(), 1) = -diag(n) * dir;
    }
  }
  Eigen::LLT<CMatrix> llt(h.entries * h.entries.adjoint());
  s.precoder = h.entries.adjoint() * llt.solve(s.effective);
  s.diag_gains = diag;
  s.total_power = power_trace(s.effective, gram.gram());
  return s;
}

PrecoderSolution band_sumrate(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                              double power_budget, double noise_power, Family family) {
  check_budget(power_budget, noise_power);
  check_depth(gram, nu);
  const RVector& levels = gram.ghat_levels(nu);
  const WaterFilling wf = water_fill(levels, power_budget / noise_power);

  RVector diag(levels.size());
  for (Index n = 0; n < levels.size(); ++n) {
    diag(n) = std::sqrt(noise_power * wf.excess(n) / levels(n));
  }
  PrecoderSolution s = assemble_band(h, gram, nu, diag);
  s.family = family;
  s.objective = Objective::SumRate;
  s.user_rates = wf.rates;
  s.water_levels = RVector::Constant(1, wf.level);
  finish_rates(s);
  return s;
}

// Water-filling (or equal-rate allocation) over triangular gains r_nn with
// sum_n b_n^2 = P_T, then F = R B and P = U^dagger B.
PrecoderSolution assemble_triangular(const LqFactors& lq, Objective objective, double power_budget,
                                     double noise_power, Family family) {
  const Index n_users = lq.r.rows();
  RVector floors(n_users);
  for (Index n = 0; n < n_users; ++n) {
    const double r = lq.r(n, n).real();
    floors(n) = 1.0 / (r * r);
  }

  PrecoderSolution s;
  s.family = family;
  s.objective = objective;
  RVector b2(n_users);
  if (objective == Objective::SumRate) {
    const WaterFilling wf = water_fill(floors, power_budget / noise_power);
    b2 = noise_power * wf.excess;
    s.user_rates = wf.rates;
    s.water_levels = RVector::Constant(1, wf.level);
  } else {
    const double snr = power_budget / (noise_power * floors.sum());
    b2 = noise_power * snr * floors;
    s.user_rates = RVector::Constant(n_users, std::log2(1.0 + snr));
    s.water_levels = floors * (1.0 + snr);
  }
  const RVector b = b2.cwiseSqrt();
  s.effective = lq.r * b.cast<cplx>().asDiagonal();
  s.precoder = lq.u.adjoint() * b.cast<cplx>().asDiagonal();
  s.diag_gains = (lq.r.diagonal().real().array() * b.array()).matrix();
  s.total_power = b2.sum();
  finish_rates(s);
  return s;
}

void check_triangular_rank(const CMatrix& r, const char* what) {
  const double scale = r.diagonal().cwiseAbs().maxCoeff();
  for (Index n = 0; n < r.rows(); ++n) {
    const double d = std::abs(r(n, n));
    if (!(d > 1e-12 * scale) || !(scale > 0.0)) {
      throw RankError(
          fmt::format("{}: triangular factor has a vanishing diagonal entry at user {}", what, n),
          d);
    }
  }
}

}  // namespace

LqFactors lq_decompose(const CMatrix& a) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (rows > cols) throw DimensionError("LQ factorisation needs rows <= cols");
  Eigen::HouseholderQR<CMatrix> qr(a.adjoint());
  CMatrix q = qr.householderQ() * CMatrix::Identity(cols, rows);
  CMatrix r_up = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();
  for (Index k = 0; k < rows; ++k) {
    const double mag = std::abs(r_up(k, k));
    if (mag > 0.0) {
      const cplx phase = r_up(k, k) / mag;
      r_up.row(k) *= std::conj(phase);
      q.col(k) *= phase;
      r_up(k, k) = mag;
    }
  }
  return {r_up.adjoint(), q.adjoint()};
}

PrecoderSolution build_zf(const ChannelMatrix& h, const GramGeometry& gram, double power_budget,
                          double noise_power) {
  return band_sumrate(h, gram, 0, power_budget, noise_power, Family::zf());
}

PrecoderSolution build_gzfdp_sumrate(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                                     double power_budget, double noise_power) {
  return band_sumrate(h, gram, nu, power_budget, noise_power, Family::gzfdp(nu));
}

PrecoderSolution build_gzfdp_minrate(const ChannelMatrix& h, const GramGeometry& gram, Index nu,
                                     double power_budget, double noise_power) {
  check_budget(power_budget, noise_power);
  check_depth(gram, nu);
  const RVector& levels = gram.ghat_levels(nu);
  const double snr = power_budget / (noise_power * levels.sum());
  const double rate = std::log2(1.0 + snr);
  const double gain = std::sqrt(noise_power * snr);

  PrecoderSolution s = assemble_band(h, gram, nu, RVector::Constant(levels.size(), gain));
  s.family = Family::gzfdp(nu);
  s.objective = Objective::MinRate;
  s.user_rates = RVector::Constant(levels.size(), rate);
  s.water_levels = levels * (1.0 + snr);
  finish_rates(s);
  return s;
}

PrecoderSolution build_zfdp(const ChannelMatrix& h, double power_budget, double noise_power,
                            Objective objective) {
  check_budget(power_budget, noise_power);
  if (h.n_users() > h.n_antennas()) throw DimensionError("more users than antennas");
  const LqFactors lq = lq_decompose(h.entries);
  check_triangular_rank(lq.r, "ZF-DP");
  return assemble_triangular(lq, objective, power_budget, noise_power, Family::zfdp());
}

PrecoderSolution build_ugdp(const ChannelMatrix& h, Index group_size, double power_budget,
                            double noise_power, Objective objective) {
  check_budget(power_budget, noise_power);
  const Index n_users = h.n_users();
  const Index n_ant = h.n_antennas();
  if (n_users > n_ant) throw DimensionError("more users than antennas");
  if (group_size < 1 || n_users % group_size != 0) {
    throw ParameterError(
        fmt::format("group size {} does not divide the number of users {}", group_size, n_users));
  }

  LqFactors full{CMatrix::Zero(n_users, n_users), CMatrix::Zero(n_users, n_ant)};
  for (Index start = 0; start < n_users; start += group_size) {
    const CMatrix hk = h.entries.middleRows(start, group_size);
    CMatrix projected = hk;
    if (group_size < n_users) {
      CMatrix others(n_users - group_size, n_ant);
      others << h.entries.topRows(start), h.entries.bottomRows(n_users - start - group_size);
      const CMatrix oo = others * others.adjoint();
      Eigen::LLT<CMatrix> llt(oo);
      if (llt.info() != Eigen::Success) {
        throw RankError("UG-DP: remaining users are rank deficient", 0.0);
      }
      // H_k (I - Hbar^dagger (Hbar Hbar^dagger)^{-1} Hbar)
      projected = hk - (hk * others.adjoint()) * llt.solve(others);
    }
    const LqFactors lq = lq_decompose(projected);
    full.r.block(start, start, group_size, group_size) = lq.r;
    full.u.middleRows(start, group_size) = lq.u;
  }
  check_triangular_rank(full.r, "UG-DP");
  return assemble_triangular(full, objective, power_budget, noise_power,
                             Family::ugdp(group_size));
}

PrecoderSolution build_precoder(const ChannelMatrix& h, const GramGeometry& gram,
                                const Family& family, Objective objective, double power_budget,
                                double noise_power) {
  switch (family.kind) {
    case Family::Kind::Zf:
      if (objective == Objective::SumRate) return build_zf(h, gram, power_budget, noise_power);
      {
        PrecoderSolution s = build_gzfdp_minrate(h, gram, 0, power_budget, noise_power);
        s.family = Family::zf();
        return s;
      }
    case Family::Kind::GzfDp:
      return objective == Objective::SumRate
                 ? build_gzfdp_sumrate(h, gram, family.param, power_budget, noise_power)
                 : build_gzfdp_minrate(h, gram, family.param, power_budget, noise_power);
    case Family::Kind::ZfDp:
      return build_zfdp(h, power_budget, noise_power, objective);
    case Family::Kind::UgDp:
      return build_ugdp(h, family.param, power_budget, noise_power, objective);
  }
  throw ParameterError("unknown precoder family");
}

double band_objective(const RVector& levels, Objective objective, double power_budget,
                      double noise_power) {
  check_budget(power_budget, noise_power);
  if (objective == Objective::MinRate) {
    return std::log2(1.0 + power_budget / (noise_power * levels.sum()));
  }
  return water_fill(levels, power_budget / noise_power).rates.sum();
}

}  // namespace gzfdp
