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

#include <span>

#include "gzfdp/types.hpp"

namespace gzfdp {

/// Solution of  sum_n [L - c_n]^+ = budget  for the water level L, where
/// c_n are the (positive) floor levels.
struct WaterFilling {
  double level = 0.0;
  RVector excess;  // [L - c_n]^+, sums to the budget
  RVector rates;   // [log2(L / c_n)]^+
  Index active = 0;
};

/// Exact active-set water-filling: floors are sorted ascending and the
/// largest active count k whose level (budget + sum of the k lowest floors)/k
/// exceeds the k-th floor is taken. No iteration; deterministic.
/// Throws ParameterError for a non-positive budget or non-positive floor.
WaterFilling water_fill(std::span<const double> floors, double budget);

inline WaterFilling water_fill(const RVector& floors, double budget) {
  return water_fill(std::span<const double>(floors.data(), static_cast<std::size_t>(floors.size())),
                    budget);
}

}  // namespace gzfdp
