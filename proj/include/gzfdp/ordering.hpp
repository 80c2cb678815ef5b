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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gzfdp/channel.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/parallel.hpp"
#include "gzfdp/precoders.hpp"

namespace gzfdp {

enum class OrderingMethod { Identity, Alg1, Alg2, BruteForceSum, BruteForceMin, Random };

const char* to_string(OrderingMethod m) noexcept;

/// perm[k] is the original index of the user placed at position k.
struct UserOrdering {
  std::vector<Index> perm;
  OrderingMethod method = OrderingMethod::Identity;
  std::uint64_t seed = 0;                 // Random only
  std::optional<double> objective_value;  // filled by searches that score orderings
};

/// Largest N accepted by exhaustive ordering searches.
inline constexpr Index kMaxBruteForceUsers = 9;

bool is_permutation(std::span<const Index> perm, Index n);

UserOrdering identity_ordering(Index n_users);

/// Rows reordered: row k of the result is row perm[k] of `h`. Throws
/// ParameterError for a non-bijective or wrongly sized permutation.
ChannelMatrix apply_ordering(const ChannelMatrix& h, const UserOrdering& ord);

/// Inverse permutation, so apply(apply(h, p), inverse(p)) == h.
UserOrdering inverse(const UserOrdering& ord);

/// Determinant-greedy ordering for the sum-rate objective. Picks the nu+1
/// users with the smallest principal determinant, then repeatedly fixes the
/// next position to the user in the carried set that maximises the
/// determinant of what remains, refilling the set from the unordered users
/// so as to minimise the new principal determinant. The final nu users are
/// ordered greedily the same way with a shrinking window. Ties go to the
/// lowest original index. nu = 0 returns the identity.
UserOrdering order_alg1(const GramGeometry& g, Index nu);

/// Users sorted by g_nn in descending order (smallest diagonal entry last);
/// stable, so ties keep the lower original index first.
UserOrdering order_alg2(const GramGeometry& g);

/// Uniformly random permutation drawn from `seed`.
UserOrdering order_random(Index n_users, std::uint64_t seed);

/// Objective of the depth-nu band precoder after reordering the users.
double score_ordering(const GramGeometry& g, Index nu, std::span<const Index> perm,
                      Objective objective, double power_budget, double noise_power);

/// Scores every one of the N! orderings; returns the lexicographically
/// smallest argmax. Throws CapabilityError when N > kMaxBruteForceUsers.
UserOrdering order_bruteforce(const GramGeometry& g, Index nu, Objective objective,
                              double power_budget, double noise_power,
                              Exec exec = Exec::Parallel);

/// Same search with an arbitrary scoring function (must be thread-safe for
/// Exec::Parallel). Used for families that need the channel itself.
UserOrdering order_bruteforce_by(Index n_users,
                                 const std::function<double(std::span<const Index>)>& score,
                                 Objective objective, Exec exec = Exec::Parallel);

/// Score of every ordering in lexicographic order (N! entries).
std::vector<double> score_all_orderings(
    Index n_users, const std::function<double(std::span<const Index>)>& score,
    Exec exec = Exec::Parallel);

}  // namespace gzfdp
