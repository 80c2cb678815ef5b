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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gzfdp/channel.hpp"
#include "gzfdp/parallel.hpp"
#include "gzfdp/precoders.hpp"

namespace gzfdp {

inline constexpr const char* kToolVersion = "0.1.0";

struct ChannelModel {
  enum class Kind { Fixture, Iid, Kronecker, FdMimo };
  Kind kind = Kind::Iid;
  std::filesystem::path path;  // Fixture
  Index users = 0;             // Iid, Kronecker (FdMimo uses geometry.n_users)
  Index antennas = 0;
  CorrelationSpec corr;        // Kronecker
  FdMimoGeometry geometry;     // FdMimo
};

struct OrderingChoice {
  enum class Kind { Identity, Alg1, Alg2, BruteForce, RandomAvg };
  Kind kind = Kind::Identity;
  int samples = 0;  // RandomAvg: number of random orderings, 0 = all N!

  std::string label() const;
};

struct PrecoderEntry {
  Family family;
  Objective objective = Objective::SumRate;
  OrderingChoice ordering;

  /// CSV label, e.g. "gzfdp[nu=1]:sum:alg1". Never contains a comma.
  std::string label() const;
};

struct Sweep {
  enum class Axis { None, PowerDb, Users, Beta };
  Axis axis = Axis::None;
  std::vector<double> values;  // sweep points; empty for None
  double power_db = 10.0;      // fixed transmit power when axis != PowerDb
};

struct ExperimentSpec {
  std::string name;
  ChannelModel channel;
  std::vector<PrecoderEntry> precoders;
  Sweep sweep;
  int trials = 500;
  std::optional<std::uint64_t> seed;
  double noise_power = 1.0;
};

const char* to_string(Sweep::Axis a) noexcept;

/// Inclusive grid lo, lo+step, ..., hi (hi included when reached within 1e-9 step).
std::vector<double> linear_grid(double lo, double hi, double step);

/// Throws ValidationError listing every violation. `fixture_dims` supplies
/// (N, M) of a fixture channel once it has been loaded.
void validate(const ExperimentSpec& spec,
              std::optional<std::pair<Index, Index>> fixture_dims = std::nullopt);

/// Canonical text form of a spec (the hash input) and its FNV-1a 64 hash as
/// 16 lowercase hex digits.
std::string canonical_text(const ExperimentSpec& spec);
std::string spec_hash(const ExperimentSpec& spec);
std::string fnv1a_hex(std::string_view text);

/// YAML spec files; see specs/SCHEMA.md. Relative fixture paths resolve
/// against the spec file's directory.
ExperimentSpec parse_spec_text(const std::string& text,
                               const std::filesystem::path& base_dir = {});
ExperimentSpec load_spec(const std::filesystem::path& path);

struct RateRow {
  double sweep = 0.0;
  std::string label;
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;

  friend bool operator==(const RateRow&, const RateRow&) = default;
};

struct RateReport {
  std::vector<RateRow> rows;
  std::string sweep_axis = "none";
  std::uint64_t seed = 0;
  std::string spec_hash;
  std::string tool_version = kToolVersion;
  int attempted_trials = 0;
  int failed_trials = 0;
};

/// Runs every precoder entry on the same channel draws (paired design).
/// Trial t draws from derive_stream(seed, t) regardless of sweep point or
/// schedule, and aggregation is in trial order, so the serial and parallel
/// paths give identical reports. Rank-deficient draws are excluded and
/// counted; 1% or more failures at any sweep point raises NumericError.
RateReport run_experiment(const ExperimentSpec& spec, Exec exec = Exec::Parallel);

/// CSV "sweep,label,mean_rate_bits,stderr,trials" with 17 significant
/// digits, plus a sidecar `<path>.meta.json` holding the run metadata.
void emit_report(const RateReport& report, const std::filesystem::path& path);
std::string report_csv(const RateReport& report);
std::vector<RateRow> read_report_csv(const std::filesystem::path& path);

}  // namespace gzfdp
