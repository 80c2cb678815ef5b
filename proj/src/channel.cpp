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

#include "gzfdp/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"
#include "gzfdp/rng.hpp"

namespace gzfdp {

const char* to_string(ChannelSource s) noexcept {
  switch (s) {
    case ChannelSource::Fixture: return "fixture";
    case ChannelSource::IidGaussian: return "iid";
    case ChannelSource::KroneckerRayleigh: return "kronecker";
    case ChannelSource::FdMimoLos: return "fdmimo";
  }
  return "unknown";
}

namespace {

void check_dims(Index n_users, Index n_antennas) {
  if (n_users < 1 || n_antennas < 1) {
    throw DimensionError(fmt::format("channel needs N >= 1 and M >= 1 (got N={}, M={})",
                                     n_users, n_antennas));
  }
  if (n_users > n_antennas) {
    throw DimensionError(
        fmt::format("more users than antennas (N={} > M={})", n_users, n_antennas));
  }
}

void check_beta(double beta, const char* name) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw ParameterError(fmt::format("{} must lie in [0, 1) (got {})", name, beta));
  }
}

}  // namespace

RMatrix exponential_correlation(Index k, double beta) {
  check_beta(beta, "correlation factor");
  RMatrix r(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      r(i, j) = std::pow(beta, static_cast<double>(std::abs(i - j)));
    }
  }
  return r;
}

RMatrix psd_sqrt(const RMatrix& r) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(r);
  RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

ChannelMatrix gen_iid_gaussian(Index n_users, Index n_antennas, std::uint64_t seed) {
  check_dims(n_users, n_antennas);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ChannelMatrix h;
  h.source = ChannelSource::IidGaussian;
  h.entries.resize(n_users, n_antennas);
  for (Index n = 0; n < n_users; ++n) {
    for (Index m = 0; m < n_antennas; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      h.entries(n, m) = cplx(re, im);
    }
  }
  return h;
}

ChannelMatrix gen_kronecker_rayleigh(Index n_users, Index n_antennas,
                                     const CorrelationSpec& corr, std::uint64_t seed) {
  check_beta(corr.beta_t, "beta_t");
  check_beta(corr.beta_r, "beta_r");
  ChannelMatrix h = gen_iid_gaussian(n_users, n_antennas, seed);
  h.source = ChannelSource::KroneckerRayleigh;
  // beta == 0 gives an identity root; skipping the product keeps the IID
  // draw bit-identical.
  if (corr.beta_r > 0.0) {
    const RMatrix rr = psd_sqrt(exponential_correlation(n_users, corr.beta_r));
    h.entries = (rr.cast<cplx>() * h.entries).eval();
  }
  if (corr.beta_t > 0.0) {
    const RMatrix rt = psd_sqrt(exponential_correlation(n_antennas, corr.beta_t));
    h.entries = (h.entries * rt.cast<cplx>()).eval();
  }
  return h;
}

void validate(const FdMimoGeometry& g) {
  if (g.array_rows < 1 || g.array_cols < 1) {
    throw ParameterError("array dimensions must be positive");
  }
  if (g.n_users < 1) throw ParameterError("n_users must be positive");
  if (g.n_users > g.array_rows * g.array_cols) {
    throw ParameterError(fmt::format("n_users={} exceeds the {} array elements", g.n_users,
                                     g.array_rows * g.array_cols));
  }
  if (!(g.element_spacing > 0.0) || !(g.carrier_hz > 0.0) || !(g.bs_height_m > 0.0) ||
      !(g.first_user_distance_m > 0.0) || !(g.user_spacing_m > 0.0)) {
    throw ParameterError("FD-MIMO lengths and carrier frequency must be strictly positive");
  }
  if (g.first_user_distance_m < g.bs_height_m) {
    throw ParameterError(fmt::format("first user distance {} m is below the array height {} m",
                                     g.first_user_distance_m, g.bs_height_m));
  }
}

ChannelMatrix gen_fdmimo_los(const FdMimoGeometry& g) {
  validate(g);
  const double lambda = kSpeedOfLight / g.carrier_hz;
  const double pitch = g.element_spacing * lambda;
  const Index n_elems = static_cast<Index>(g.array_rows) * g.array_cols;

  // Array in the vertical x-z plane; boresight along +y.
  std::vector<Eigen::Vector3d> elems;
  elems.reserve(static_cast<std::size_t>(n_elems));
  for (int r = 0; r < g.array_rows; ++r) {
    for (int c = 0; c < g.array_cols; ++c) {
      const double x = (c - 0.5 * (g.array_cols - 1)) * pitch;
      const double z = g.bs_height_m + (0.5 * (g.array_rows - 1) - r) * pitch;
      elems.emplace_back(x, 0.0, z);
    }
  }

  // The first user is first_user_distance_m from the array centre; the rest
  // follow along the ground at user_spacing_m.
  const double y0 = std::sqrt(g.first_user_distance_m * g.first_user_distance_m -
                              g.bs_height_m * g.bs_height_m);

  ChannelMatrix h;
  h.source = ChannelSource::FdMimoLos;
  h.entries.resize(g.n_users, n_elems);
  for (int n = 0; n < g.n_users; ++n) {
    const Eigen::Vector3d user(0.0, y0 + n * g.user_spacing_m, 0.0);
    for (Index m = 0; m < n_elems; ++m) {
      const double d = (user - elems[static_cast<std::size_t>(m)]).norm();
      const double amp = lambda / (4.0 * std::numbers::pi * d);
      h.entries(n, m) = std::polar(amp, -2.0 * std::numbers::pi * d / lambda);
    }
  }
  return h;
}

}  // namespace gzfdp
