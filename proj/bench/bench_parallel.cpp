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

// Serial reference path vs. OpenMP path for the two data-parallel kernels.

#include <benchmark/benchmark.h>

#include "gzfdp/channel.hpp"
#include "gzfdp/experiment.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/ordering.hpp"
#include "gzfdp/rng.hpp"

using namespace gzfdp;

namespace {

ExperimentSpec monte_carlo_spec(int trials) {
  ExperimentSpec spec;
  spec.name = "bench";
  spec.seed = 42;
  spec.trials = trials;
  spec.channel.kind = ChannelModel::Kind::Iid;
  spec.channel.users = 8;
  spec.channel.antennas = 8;
  spec.sweep.axis = Sweep::Axis::PowerDb;
  spec.sweep.values = {0.0, 10.0, 20.0, 30.0};
  for (Index nu : {0, 1, 3, 7}) spec.precoders.push_back({Family::gzfdp(nu), Objective::SumRate, {}});
  spec.precoders.push_back({Family::ugdp(2), Objective::SumRate, {}});
  return spec;
}

void BM_Experiment(benchmark::State& state, Exec exec) {
  const ExperimentSpec spec = monte_carlo_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = exec == Exec::Serial ? 1 : parallel_threads();
}

void BM_BruteForce(benchmark::State& state, Exec exec) {
  const auto n = static_cast<Index>(state.range(0));
  const GramGeometry g = GramGeometry::build(gen_iid_gaussian(n, n, derive_stream(7, 0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(order_bruteforce(g, 1, Objective::SumRate, 10.0, 1.0, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(factorial(static_cast<int>(n))));
  state.counters["threads"] = exec == Exec::Serial ? 1 : parallel_threads();
}

}  // namespace

BENCHMARK_CAPTURE(BM_Experiment, serial, Exec::Serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Experiment, parallel, Exec::Parallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForce, serial, Exec::Serial)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForce, parallel, Exec::Parallel)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
