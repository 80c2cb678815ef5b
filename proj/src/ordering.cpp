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

#include "gzfdp/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"
#include "gzfdp/rng.hpp"

namespace gzfdp {

const char* to_string(OrderingMethod m) noexcept {
  switch (m) {
    case OrderingMethod::Identity: return "identity";
    case OrderingMethod::Alg1: return "alg1";
    case OrderingMethod::Alg2: return "alg2";
    case OrderingMethod::BruteForceSum: return "brute-sum";
    case OrderingMethod::BruteForceMin: return "brute-min";
    case OrderingMethod::Random: return "random";
  }
  return "unknown";
}

bool is_permutation(std::span<const Index> perm, Index n) {
  if (static_cast<Index>(perm.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) return false;
    seen[static_cast<std::size_t>(p)] = true;
  }
  return true;
}

UserOrdering identity_ordering(Index n_users) {
  UserOrdering ord;
  ord.perm.resize(static_cast<std::size_t>(n_users));
  std::iota(ord.perm.begin(), ord.perm.end(), Index{0});
  return ord;
}

ChannelMatrix apply_ordering(const ChannelMatrix& h, const UserOrdering& ord) {
  if (!is_permutation(ord.perm, h.n_users())) {
    throw ParameterError(
        fmt::format("ordering is not a permutation of {} users", h.n_users()));
  }
  ChannelMatrix out;
  out.source = h.source;
  out.entries.resize(h.n_users(), h.n_antennas());
  for (Index k = 0; k < h.n_users(); ++k) {
    out.entries.row(k) = h.entries.row(ord.perm[static_cast<std::size_t>(k)]);
  }
  return out;
}

UserOrdering inverse(const UserOrdering& ord) {
  const auto n = static_cast<Index>(ord.perm.size());
  if (!is_permutation(ord.perm, n)) throw ParameterError("ordering is not a permutation");
  UserOrdering inv = ord;
  for (Index k = 0; k < n; ++k) inv.perm[static_cast<std::size_t>(ord.perm[static_cast<std::size_t>(k)])] = k;
  return inv;
}

namespace {

std::vector<Index> without(const std::vector<Index>& set, Index user) {
  std::vector<Index> out;
  out.reserve(set.size());
  for (Index u : set) {
    if (u != user) out.push_back(u);
  }
  return out;
}

// Member of `candidates` (scanned in ascending order) whose removal from
// `window` leaves the largest determinant.
Index pick_max_remainder(const GramGeometry& g, const std::vector<Index>& window,
                         const std::vector<Index>& candidates) {
  Index best = -1;
  double best_det = 0.0;
  for (Index u : candidates) {
    const double det = g.principal_det(without(window, u));
    if (best < 0 || det > best_det) {
      best = u;
      best_det = det;
    }
  }
  return best;
}

}  // namespace

UserOrdering order_alg1(const GramGeometry& g, Index nu) {
  const Index n_users = g.n_users();
  if (nu < 0 || nu > n_users - 1) {
    throw ParameterError(fmt::format("interfering depth {} outside [0, {}]", nu, n_users - 1));
  }
  if (nu == 0) {
    UserOrdering ord = identity_ordering(n_users);
    ord.method = OrderingMethod::Alg1;
    return ord;
  }

  // Stage 1: the nu+1 users minimising the principal determinant, over all
  // combinations in lexicographic order (first minimum wins).
  const auto k = static_cast<std::size_t>(nu + 1);
  std::vector<Index> combo(k);
  std::iota(combo.begin(), combo.end(), Index{0});
  std::vector<Index> window;
  double best_det = 0.0;
  while (true) {
    const double det = g.principal_det(combo);
    if (window.empty() || det < best_det) {
      window = combo;
      best_det = det;
    }
    // Next combination.
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == n_users - static_cast<Index>(k - i) - 1) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }

  std::vector<bool> placed(static_cast<std::size_t>(n_users), false);
  UserOrdering ord;
  ord.method = OrderingMethod::Alg1;
  ord.perm.reserve(static_cast<std::size_t>(n_users));

  // `fresh` is the user most recently added to the window; it may not be
  // placed at the next position, which keeps the previous level unchanged.
  Index fresh = -1;
  while (true) {
    std::vector<Index> candidates = without(window, fresh);
    std::sort(candidates.begin(), candidates.end());
    const Index chosen = pick_max_remainder(g, window, candidates);
    ord.perm.push_back(chosen);
    placed[static_cast<std::size_t>(chosen)] = true;

    std::vector<Index> carried = without(window, chosen);
    std::vector<Index> pool;
    for (Index u = 0; u < n_users; ++u) {
      if (!placed[static_cast<std::size_t>(u)] &&
          std::find(carried.begin(), carried.end(), u) == carried.end()) {
        pool.push_back(u);
      }
    }
    if (pool.empty()) {
      window = std::move(carried);
      break;
    }

    Index refill = -1;
    double refill_det = 0.0;
    for (Index u : pool) {
      std::vector<Index> trial = carried;
      trial.push_back(u);
      const double det = g.principal_det(trial);
      if (refill < 0 || det < refill_det) {
        refill = u;
        refill_det = det;
      }
    }
    carried.push_back(refill);
    window = std::move(carried);
    fresh = refill;
  }

  // The last nu users: greedy with a shrinking window.
  while (!window.empty()) {
    std::vector<Index> candidates = window;
    std::sort(candidates.begin(), candidates.end());
    const Index chosen = pick_max_remainder(g, window, candidates);
    ord.perm.push_back(chosen);
    window = without(window, chosen);
  }
  return ord;
}

UserOrdering order_alg2(const GramGeometry& g) {
  UserOrdering ord = identity_ordering(g.n_users());
  ord.method = OrderingMethod::Alg2;
  const CMatrix& gram = g.gram();
  std::stable_sort(ord.perm.begin(), ord.perm.end(), [&](Index a, Index b) {
    return gram(a, a).real() > gram(b, b).real();
  });
  return ord;
}

UserOrdering order_random(Index n_users, std::uint64_t seed) {
  UserOrdering ord = identity_ordering(n_users);
  ord.method = OrderingMethod::Random;
  ord.seed = seed;
  Rng rng = make_rng(seed);
  // Fisher-Yates with an explicit distribution so the result does not depend
  // on the standard library's shuffle implementation.
  for (Index i = n_users - 1; i > 0; --i) {
    std::uniform_int_distribution<Index> pick(0, i);
    std::swap(ord.perm[static_cast<std::size_t>(i)], ord.perm[static_cast<std::size_t>(pick(rng))]);
  }
  return ord;
}

double score_ordering(const GramGeometry& g, Index nu, std::span<const Index> perm,
                      Objective objective, double power_budget, double noise_power) {
  const GramGeometry reordered = g.permuted(perm);
  return band_objective(reordered.ghat_levels(nu), objective, power_budget, noise_power);
}

std::vector<double> score_all_orderings(
    Index n_users, const std::function<double(std::span<const Index>)>& score, Exec exec) {
  if (n_users > kMaxBruteForceUsers) {
    throw CapabilityError(fmt::format(
        "exhaustive ordering over {}! permutations is not supported (N <= {}); use alg1 or alg2",
        n_users, kMaxBruteForceUsers));
  }
  const int n = static_cast<int>(n_users);
  const std::uint64_t total = factorial(n);
  std::vector<double> scores(static_cast<std::size_t>(total));

  if (exec == Exec::Serial) {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::size_t k = 0;
    do {
      scores[k++] = score(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return scores;
  }

  ExceptionSlot errors;
  const auto count = static_cast<long long>(total);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long k = 0; k < count; ++k) {
    errors.run([&] {
      const auto perm = kth_permutation(n, static_cast<std::uint64_t>(k));
      scores[static_cast<std::size_t>(k)] = score(perm);
    });
  }
  errors.rethrow();
  return scores;
}

UserOrdering order_bruteforce_by(Index n_users,
                                 const std::function<double(std::span<const Index>)>& score,
                                 Objective objective, Exec exec) {
  const std::vector<double> scores = score_all_orderings(n_users, score, exec);
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  UserOrdering ord;
  ord.perm = kth_permutation(static_cast<int>(n_users), best);
  ord.method = objective == Objective::SumRate ? OrderingMethod::BruteForceSum
                                               : OrderingMethod::BruteForceMin;
  ord.objective_value = scores[best];
  return ord;
}

UserOrdering order_bruteforce(const GramGeometry& g, Index nu, Objective objective,
                              double power_budget, double noise_power, Exec exec) {
  if (nu < 0 || nu > g.n_users() - 1) {
    throw ParameterError(
        fmt::format("interfering depth {} outside [0, {}]", nu, g.n_users() - 1));
  }
  if (!(power_budget > 0.0) || !(noise_power > 0.0)) {
    throw ParameterError("power budget and noise power must be positive");
  }
  return order_bruteforce_by(
      g.n_users(),
      [&](std::span<const Index> perm) {
        return score_ordering(g, nu, perm, objective, power_budget, noise_power);
      },
      objective, exec);
}

}  // namespace gzfdp
