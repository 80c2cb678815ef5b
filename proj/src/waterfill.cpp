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

#include "gzfdp/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"

namespace gzfdp {

WaterFilling water_fill(std::span<const double> floors, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw ParameterError(fmt::format("power budget must be positive and finite (got {})", budget));
  }
  if (floors.empty()) throw DimensionError("water-filling over an empty set");
  for (double c : floors) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw ParameterError(fmt::format("water-filling floor must be positive (got {})", c));
    }
  }

  std::vector<double> sorted(floors.begin(), floors.end());
  std::sort(sorted.begin(), sorted.end());

  const auto n = sorted.size();
  std::vector<double> prefix(n + 1, 0.0);
  std::partial_sum(sorted.begin(), sorted.end(), prefix.begin() + 1);

  WaterFilling wf;
  for (auto k = n; k >= 1; --k) {
    const double level = (budget + prefix[k]) / static_cast<double>(k);
    if (level > sorted[k - 1]) {
      wf.level = level;
      wf.active = static_cast<Index>(k);
      break;
    }
  }

  const auto size = static_cast<Index>(n);
  wf.excess.resize(size);
  wf.rates.resize(size);
  for (Index i = 0; i < size; ++i) {
    const double c = floors[static_cast<std::size_t>(i)];
    if (wf.level > c) {
      wf.excess(i) = wf.level - c;
      wf.rates(i) = std::log2(wf.level / c);
    } else {
      wf.excess(i) = 0.0;
      wf.rates(i) = 0.0;
    }
  }
  return wf;
}

}  // namespace gzfdp
