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

#include "gzfdp/gram.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"

namespace gzfdp {

GramGeometry::LevelCache::LevelCache(Index n)
    : once(std::make_unique<std::once_flag[]>(static_cast<std::size_t>(n))),
      levels(static_cast<std::size_t>(n)) {}

GramGeometry GramGeometry::build(const ChannelMatrix& h, double noise_power) {
  if (h.n_users() < 1) throw DimensionError("empty channel");
  if (h.n_users() > h.n_antennas()) {
    throw DimensionError(fmt::format("more users than antennas (N={} > M={})", h.n_users(),
                                     h.n_antennas()));
  }
  const CMatrix hh = h.entries * h.entries.adjoint();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hh, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double sigma_min = std::sqrt(std::max(lo, 0.0));
  if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
    throw RankError(fmt::format("channel is rank deficient: smallest singular value {:.3e}, "
                                "condition estimate of H H^dagger {:.3e}",
                                sigma_min, lo > 0.0 ? hi / lo : INFINITY),
                    sigma_min);
  }

  Eigen::LLT<CMatrix> llt(hh);
  if (llt.info() != Eigen::Success) {
    throw RankError("Cholesky factorisation of H H^dagger failed", sigma_min);
  }
  CMatrix g = llt.solve(CMatrix::Identity(hh.rows(), hh.cols()));
  g = (0.5 * (g + g.adjoint())).eval();
  return GramGeometry(std::move(g), noise_power);
}

GramGeometry::GramGeometry(CMatrix gram, double noise_power)
    : gram_(std::move(gram)), noise_power_(noise_power) {
  if (gram_.rows() < 1 || gram_.rows() != gram_.cols()) {
    throw DimensionError("Gram matrix must be square and non-empty");
  }
  if (!(noise_power_ > 0.0) || !std::isfinite(noise_power_)) {
    throw ParameterError(fmt::format("noise power must be positive (got {})", noise_power_));
  }
  const double scale = gram_.norm();
  if ((gram_ - gram_.adjoint()).norm() > 1e-10 * scale) {
    throw ParameterError("Gram matrix is not Hermitian");
  }
  Eigen::LLT<CMatrix> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw ParameterError("Gram matrix is not positive definite");
  }
  cache_ = std::make_shared<LevelCache>(gram_.rows());
}

void GramGeometry::check_indices(Index n, Index nu) const {
  const Index big_n = n_users();
  if (n < 0 || n >= big_n) {
    throw ParameterError(fmt::format("user index {} outside [0, {})", n, big_n));
  }
  if (nu < 0 || nu > big_n - 1) {
    throw ParameterError(fmt::format("depth {} outside [0, {}]", nu, big_n - 1));
  }
}

CMatrix GramGeometry::principal_submatrix(Index n, Index nu) const {
  check_indices(n, nu);
  const Index len = clamp_up(n, nu, n_users()) - n + 1;
  return gram_.block(n, n, len, len);
}

CVector GramGeometry::border_vector(Index n, Index nu) const {
  check_indices(n, nu);
  const Index len = clamp_up(n, nu, n_users()) - n;
  // [g_{n,n+1}, ..., g_{n,end}]^dagger is the column below g_nn.
  return gram_.block(n + 1, n, len, 1);
}

CVector GramGeometry::band_direction(Index n, Index nu) const {
  check_indices(n, nu);
  const Index len = clamp_up(n, nu, n_users()) - n;
  if (len == 0) return CVector(0);
  Eigen::LLT<CMatrix> llt(gram_.block(n + 1, n + 1, len, len));
  return llt.solve(gram_.block(n + 1, n, len, 1));
}

double GramGeometry::schur_ghat(Index n, Index nu) const {
  check_indices(n, nu);
  return ghat_levels(nu)(n);
}

const RVector& GramGeometry::ghat_levels(Index nu) const {
  check_indices(0, nu);
  const auto slot = static_cast<std::size_t>(nu);
  std::call_once(cache_->once[slot], [&] {
    const Index big_n = n_users();
    RVector out(big_n);
    for (Index n = 0; n < big_n; ++n) {
      const Index len = clamp_up(n, nu, big_n) - n;
      double value = gram_(n, n).real();
      if (len > 0) {
        const auto b = gram_.block(n + 1, n, len, 1);
        Eigen::LLT<CMatrix> llt(gram_.block(n + 1, n + 1, len, len));
        value -= (b.adjoint() * llt.solve(b))(0, 0).real();
      }
      out(n) = value;
    }
    cache_->levels[slot] = std::move(out);
  });
  return cache_->levels[slot];
}

RVector GramGeometry::ghat_chain(Index n) const {
  check_indices(n, 0);
  RVector chain(n_users());
  for (Index nu = 0; nu < n_users(); ++nu) chain(nu) = ghat_levels(nu)(n);
  return chain;
}

double GramGeometry::principal_det(std::span<const Index> users) const {
  const auto k = static_cast<Index>(users.size());
  if (k == 0) return 1.0;
  CMatrix sub(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      sub(i, j) = gram_(users[static_cast<std::size_t>(i)], users[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::LLT<CMatrix> llt(sub);
  const auto& l = llt.matrixLLT();
  double det = 1.0;
  for (Index i = 0; i < k; ++i) det *= l(i, i).real() * l(i, i).real();
  return det;
}

GramGeometry GramGeometry::permuted(std::span<const Index> perm) const {
  const Index big_n = n_users();
  if (static_cast<Index>(perm.size()) != big_n) {
    throw ParameterError("permutation length does not match the number of users");
  }
  CMatrix g(big_n, big_n);
  for (Index i = 0; i < big_n; ++i) {
    for (Index j = 0; j < big_n; ++j) {
      g(i, j) = gram_(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  return GramGeometry(std::move(g), noise_power_);
}

}  // namespace gzfdp
