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

#include "gzfdp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include <fmt/format.h>

#include "gzfdp/errors.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/ordering.hpp"
#include "gzfdp/rng.hpp"

namespace gzfdp {

const char* to_string(Sweep::Axis a) noexcept {
  switch (a) {
    case Sweep::Axis::None: return "none";
    case Sweep::Axis::PowerDb: return "power_db";
    case Sweep::Axis::Users: return "users";
    case Sweep::Axis::Beta: return "beta";
  }
  return "unknown";
}

std::string OrderingChoice::label() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::Alg1: return "alg1";
    case Kind::Alg2: return "alg2";
    case Kind::BruteForce: return "brute";
    case Kind::RandomAvg: return samples == 0 ? "random:all" : fmt::format("random:{}", samples);
  }
  return "unknown";
}

std::string PrecoderEntry::label() const {
  std::string out = fmt::format("{}:{}", family.label(), to_string(objective));
  if (ordering.kind != OrderingChoice::Kind::Identity) out += ":" + ordering.label();
  return out;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ParameterError("grid needs step > 0 and hi >= lo");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

namespace {

struct PointSetup {
  double sweep_value = 0.0;
  Index users = 0;
  Index antennas = 0;
  CorrelationSpec corr;
  double power_db = 0.0;
};

std::vector<PointSetup> sweep_points(const ExperimentSpec& spec, Index fixture_n,
                                     Index fixture_m) {
  PointSetup base;
  base.power_db = spec.sweep.power_db;
  base.corr = spec.channel.corr;
  switch (spec.channel.kind) {
    case ChannelModel::Kind::Fixture:
      base.users = fixture_n;
      base.antennas = fixture_m;
      break;
    case ChannelModel::Kind::FdMimo:
      base.users = spec.channel.geometry.n_users;
      base.antennas = static_cast<Index>(spec.channel.geometry.array_rows) *
                      spec.channel.geometry.array_cols;
      break;
    default:
      base.users = spec.channel.users;
      base.antennas = spec.channel.antennas;
  }

  std::vector<PointSetup> points;
  if (spec.sweep.axis == Sweep::Axis::None) {
    base.sweep_value = base.power_db;
    points.push_back(base);
    return points;
  }
  for (double v : spec.sweep.values) {
    PointSetup p = base;
    p.sweep_value = v;
    switch (spec.sweep.axis) {
      case Sweep::Axis::PowerDb: p.power_db = v; break;
      case Sweep::Axis::Users: p.users = static_cast<Index>(std::llround(v)); break;
      case Sweep::Axis::Beta: p.corr = {v, v}; break;
      case Sweep::Axis::None: break;
    }
    points.push_back(p);
  }
  return points;
}

// Depth whose band structure the ordering heuristics should target.
Index ordering_depth(const Family& f, Index n_users) {
  switch (f.kind) {
    case Family::Kind::Zf: return 0;
    case Family::Kind::GzfDp: return f.param;
    case Family::Kind::ZfDp: return n_users - 1;
    case Family::Kind::UgDp: return f.param - 1;
  }
  return 0;
}

bool is_band_family(const Family& f) {
  return f.kind == Family::Kind::Zf || f.kind == Family::Kind::GzfDp;
}

ChannelMatrix draw_channel(const ExperimentSpec& spec, const PointSetup& p,
                           const ChannelMatrix& fixture, std::uint64_t stream) {
  switch (spec.channel.kind) {
    case ChannelModel::Kind::Fixture: return fixture;
    case ChannelModel::Kind::Iid: return gen_iid_gaussian(p.users, p.antennas, stream);
    case ChannelModel::Kind::Kronecker:
      return gen_kronecker_rayleigh(p.users, p.antennas, p.corr, stream);
    case ChannelModel::Kind::FdMimo: {
      FdMimoGeometry g = spec.channel.geometry;
      g.n_users = static_cast<int>(p.users);
      return gen_fdmimo_los(g);
    }
  }
  throw ParameterError("unknown channel model");
}

double evaluate_entry(const PrecoderEntry& e, const ChannelMatrix& h, const GramGeometry& gram,
                      double power, double noise, std::uint64_t stream, Exec inner) {
  const Index n_users = h.n_users();

  // Objective of this entry's precoder with the users reordered by `perm`.
  auto score = [&](std::span<const Index> perm) {
    if (is_band_family(e.family)) {
      return score_ordering(gram, ordering_depth(e.family, n_users), perm, e.objective, power,
                            noise);
    }
    UserOrdering ord;
    ord.perm.assign(perm.begin(), perm.end());
    const ChannelMatrix hp = apply_ordering(h, ord);
    return build_precoder(hp, gram.permuted(perm), e.family, e.objective, power, noise)
        .objective_value();
  };

  auto solve_with = [&](const UserOrdering& ord) {
    const ChannelMatrix hp = apply_ordering(h, ord);
    return build_precoder(hp, gram.permuted(ord.perm), e.family, e.objective, power, noise)
        .objective_value();
  };

  switch (e.ordering.kind) {
    case OrderingChoice::Kind::Identity:
      return build_precoder(h, gram, e.family, e.objective, power, noise).objective_value();
    case OrderingChoice::Kind::Alg1:
      return solve_with(order_alg1(gram, ordering_depth(e.family, n_users)));
    case OrderingChoice::Kind::Alg2:
      return solve_with(order_alg2(gram));
    case OrderingChoice::Kind::BruteForce:
      return *order_bruteforce_by(n_users, score, e.objective, inner).objective_value;
    case OrderingChoice::Kind::RandomAvg: {
      if (e.ordering.samples == 0) {
        const std::vector<double> all = score_all_orderings(n_users, score, inner);
        double acc = 0.0;
        for (double v : all) acc += v;
        return acc / static_cast<double>(all.size());
      }
      // Orderings depend on the trial only, so every random entry of a trial
      // sees the same permutations.
      double acc = 0.0;
      for (int k = 0; k < e.ordering.samples; ++k) {
        const UserOrdering ord = order_random(n_users, derive_stream(stream, 1000003ULL + k));
        acc += score(ord.perm);
      }
      return acc / e.ordering.samples;
    }
  }
  throw ParameterError("unknown ordering choice");
}

struct TrialOutcome {
  bool failed = false;
  std::vector<double> values;
};

}  // namespace

void validate(const ExperimentSpec& spec, std::optional<std::pair<Index, Index>> fixture_dims) {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };

  if (spec.trials < 1) fail(fmt::format("trials must be >= 1 (got {})", spec.trials));
  if (!(spec.noise_power > 0.0) || !std::isfinite(spec.noise_power)) {
    fail(fmt::format("noise_power must be positive (got {})", spec.noise_power));
  }
  if (!spec.seed) fail("seed is not set");
  if (spec.precoders.empty()) fail("at least one precoder entry is required");

  const auto& ch = spec.channel;
  switch (ch.kind) {
    case ChannelModel::Kind::Fixture:
      if (ch.path.empty()) fail("fixture channel needs a path");
      if (spec.trials != 1) fail("fixture channels are deterministic: trials must be 1");
      if (spec.sweep.axis == Sweep::Axis::Users || spec.sweep.axis == Sweep::Axis::Beta) {
        fail("fixture channels only support a power_db sweep");
      }
      break;
    case ChannelModel::Kind::Iid:
    case ChannelModel::Kind::Kronecker:
      if (spec.sweep.axis != Sweep::Axis::Users && ch.users < 1) fail("channel.users must be >= 1");
      if (ch.antennas < 1) fail("channel.antennas must be >= 1");
      if (ch.kind == ChannelModel::Kind::Kronecker) {
        for (double b : {ch.corr.beta_t, ch.corr.beta_r}) {
          if (!(b >= 0.0 && b < 1.0)) fail(fmt::format("correlation factor {} outside [0, 1)", b));
        }
      }
      if (ch.kind == ChannelModel::Kind::Iid && spec.sweep.axis == Sweep::Axis::Beta) {
        fail("beta sweep requires the kronecker channel model");
      }
      break;
    case ChannelModel::Kind::FdMimo:
      try {
        validate(ch.geometry);
      } catch (const Error& e) {
        fail(e.what());
      }
      if (spec.sweep.axis == Sweep::Axis::Beta) fail("beta sweep requires the kronecker channel model");
      break;
  }

  if (spec.sweep.axis != Sweep::Axis::None && spec.sweep.values.empty()) {
    fail("sweep has no points");
  }
  if (!std::isfinite(spec.sweep.power_db)) fail("sweep.power_db must be finite");
  for (double v : spec.sweep.values) {
    if (!std::isfinite(v)) fail(fmt::format("sweep value {} is not finite", v));
    if (spec.sweep.axis == Sweep::Axis::Beta && !(v >= 0.0 && v < 1.0)) {
      fail(fmt::format("beta sweep value {} outside [0, 1)", v));
    }
    if (spec.sweep.axis == Sweep::Axis::Users && (v < 1.0 || v != std::floor(v))) {
      fail(fmt::format("users sweep value {} is not a positive integer", v));
    }
  }

  Index fn = 0;
  Index fm = 0;
  if (fixture_dims) std::tie(fn, fm) = *fixture_dims;
  const bool dims_known = ch.kind != ChannelModel::Kind::Fixture || fixture_dims.has_value();
  if (issues.empty() && dims_known) {
    for (const PointSetup& p : sweep_points(spec, fn, fm)) {
      if (p.users > p.antennas) {
        fail(fmt::format("N={} exceeds M={} at sweep value {}", p.users, p.antennas,
                         p.sweep_value));
      }
      if (ch.kind == ChannelModel::Kind::FdMimo &&
          p.users > static_cast<Index>(ch.geometry.array_rows) * ch.geometry.array_cols) {
        fail("FD-MIMO users exceed array elements");
      }
      for (const PrecoderEntry& e : spec.precoders) {
        if (e.family.kind == Family::Kind::GzfDp &&
            (e.family.param < 0 || e.family.param > p.users - 1)) {
          fail(fmt::format("{}: depth outside [0, {}] at N={}", e.label(), p.users - 1, p.users));
        }
        if (e.family.kind == Family::Kind::UgDp &&
            (e.family.param < 1 || p.users % e.family.param != 0)) {
          fail(fmt::format("{}: group size does not divide N={}", e.label(), p.users));
        }
        const bool exhaustive =
            e.ordering.kind == OrderingChoice::Kind::BruteForce ||
            (e.ordering.kind == OrderingChoice::Kind::RandomAvg && e.ordering.samples == 0);
        if (exhaustive && p.users > kMaxBruteForceUsers) {
          fail(fmt::format("{}: exhaustive ordering needs N <= {} (N={})", e.label(),
                           kMaxBruteForceUsers, p.users));
        }
        if (e.ordering.kind == OrderingChoice::Kind::RandomAvg && e.ordering.samples < 0) {
          fail(fmt::format("{}: negative random sample count", e.label()));
        }
      }
    }
  }

  if (!issues.empty()) {
    std::string msg = fmt::format("invalid experiment spec ({} issue{}):", issues.size(),
                                  issues.size() == 1 ? "" : "s");
    for (const auto& s : issues) msg += "\n  - " + s;
    throw ValidationError(msg);
  }
}

std::string canonical_text(const ExperimentSpec& spec) {
  std::string out;
  out += fmt::format("name={}\ntrials={}\nseed={}\nnoise_power={:.17g}\n", spec.name, spec.trials,
                     spec.seed ? fmt::format("{}", *spec.seed) : "unset", spec.noise_power);
  const auto& ch = spec.channel;
  switch (ch.kind) {
    case ChannelModel::Kind::Fixture:
      out += fmt::format("channel=fixture:{}\n", ch.path.generic_string());
      break;
    case ChannelModel::Kind::Iid:
      out += fmt::format("channel=iid:{}x{}\n", ch.users, ch.antennas);
      break;
    case ChannelModel::Kind::Kronecker:
      out += fmt::format("channel=kronecker:{}x{}:{:.17g}:{:.17g}\n", ch.users, ch.antennas,
                         ch.corr.beta_t, ch.corr.beta_r);
      break;
    case ChannelModel::Kind::FdMimo: {
      const auto& g = ch.geometry;
      out += fmt::format("channel=fdmimo:{}x{}:{:.17g}:{:.17g}:{:.17g}:{:.17g}:{:.17g}:{}\n",
                         g.array_rows, g.array_cols, g.element_spacing, g.carrier_hz,
                         g.bs_height_m, g.first_user_distance_m, g.user_spacing_m, g.n_users);
      break;
    }
  }
  out += fmt::format("sweep={}:{:.17g}:", to_string(spec.sweep.axis), spec.sweep.power_db);
  for (double v : spec.sweep.values) out += fmt::format("{:.17g};", v);
  out += "\n";
  for (const auto& e : spec.precoders) out += "precoder=" + e.label() + "\n";
  return out;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string spec_hash(const ExperimentSpec& spec) { return fnv1a_hex(canonical_text(spec)); }

RateReport run_experiment(const ExperimentSpec& spec, Exec exec) {
  ChannelMatrix fixture;
  std::optional<std::pair<Index, Index>> dims;
  if (spec.channel.kind == ChannelModel::Kind::Fixture) {
    fixture = load_channel_fixture(spec.channel.path);
    dims = std::make_pair(fixture.n_users(), fixture.n_antennas());
  }
  validate(spec, dims);

  const std::vector<PointSetup> points = sweep_points(spec, fixture.n_users(), fixture.n_antennas());
  const auto n_points = static_cast<long long>(points.size());
  const long long n_trials = spec.trials;
  const std::size_t n_entries = spec.precoders.size();
  const std::uint64_t seed = *spec.seed;

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n_points * n_trials));

  auto run_one = [&](long long idx, Exec inner) {
    const PointSetup& p = points[static_cast<std::size_t>(idx / n_trials)];
    const auto trial = static_cast<std::uint64_t>(idx % n_trials);
    const std::uint64_t stream = derive_stream(seed, trial);
    TrialOutcome& out = outcomes[static_cast<std::size_t>(idx)];
    try {
      const ChannelMatrix h = draw_channel(spec, p, fixture, stream);
      const GramGeometry gram = GramGeometry::build(h, spec.noise_power);
      const double power = db_to_linear(p.power_db);
      out.values.reserve(n_entries);
      for (const PrecoderEntry& e : spec.precoders) {
        out.values.push_back(evaluate_entry(e, h, gram, power, spec.noise_power, stream, inner));
      }
    } catch (const RankError&) {
      out.failed = true;
      out.values.clear();
    }
  };

  const long long total = n_points * n_trials;
  if (exec == Exec::Serial) {
    for (long long idx = 0; idx < total; ++idx) run_one(idx, Exec::Serial);
  } else {
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long idx = 0; idx < total; ++idx) {
      errors.run([&] { run_one(idx, Exec::Serial); });
    }
    errors.rethrow();
  }

  RateReport report;
  report.sweep_axis = to_string(spec.sweep.axis);
  report.seed = seed;
  report.spec_hash = spec_hash(spec);
  report.attempted_trials = static_cast<int>(total);

  for (long long pi = 0; pi < n_points; ++pi) {
    int failed = 0;
    for (long long t = 0; t < n_trials; ++t) {
      if (outcomes[static_cast<std::size_t>(pi * n_trials + t)].failed) ++failed;
    }
    report.failed_trials += failed;
    if (failed > 0 && 100LL * failed >= n_trials) {
      throw NumericError(fmt::format(
          "{} of {} trials were rank deficient at sweep value {} (limit: under 1%)", failed,
          n_trials, points[static_cast<std::size_t>(pi)].sweep_value));
    }
    for (std::size_t e = 0; e < n_entries; ++e) {
      double sum = 0.0;
      int n = 0;
      for (long long t = 0; t < n_trials; ++t) {
        const auto& o = outcomes[static_cast<std::size_t>(pi * n_trials + t)];
        if (o.failed) continue;
        sum += o.values[e];
        ++n;
      }
      const double mean = sum / n;
      double ss = 0.0;
      for (long long t = 0; t < n_trials; ++t) {
        const auto& o = outcomes[static_cast<std::size_t>(pi * n_trials + t)];
        if (o.failed) continue;
        ss += (o.values[e] - mean) * (o.values[e] - mean);
      }
      const double se = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
      report.rows.push_back({points[static_cast<std::size_t>(pi)].sweep_value,
                             spec.precoders[e].label(), mean, se, n});
    }
  }

  std::stable_sort(report.rows.begin(), report.rows.end(), [](const RateRow& a, const RateRow& b) {
    if (a.sweep != b.sweep) return a.sweep < b.sweep;
    return a.label < b.label;
  });
  return report;
}

}  // namespace gzfdp
