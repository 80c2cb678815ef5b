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

// gzfdp: command-line front end for the precoder library.

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gzfdp/channel.hpp"
#include "gzfdp/errors.hpp"
#include "gzfdp/experiment.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/ordering.hpp"
#include "gzfdp/precoders.hpp"
#include "gzfdp/rng.hpp"

namespace {

using namespace gzfdp;

enum ExitCode { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError(fmt::format("{} '{}' is not a 64-bit unsigned integer", what, text));
}

// --seed, then the given fallback (a spec file's seed), then GZFDP_SEED, then entropy.
std::uint64_t resolve_seed(const std::optional<std::string>& flag,
                           std::optional<std::uint64_t> fallback = std::nullopt) {
  if (flag) return parse_seed(*flag, "--seed");
  if (fallback) return *fallback;
  if (const char* env = std::getenv("GZFDP_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env, "GZFDP_SEED");
  }
  return entropy_seed();
}

void announce(std::uint64_t seed, const std::string& hash) {
  fmt::print(stderr, "seed: {}\nspec_hash: {}\n", seed, hash);
}

double parse_power_db(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ParameterError(fmt::format("--pt-db '{}' is not a number", text));
  }
  if (!std::isfinite(v)) throw ParameterError(fmt::format("--pt-db must be finite (got {})", text));
  return v;
}

void check_noise(double n0) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) {
    throw ParameterError(fmt::format("--n0 must be positive and finite (got {})", n0));
  }
}

Objective parse_objective(const std::string& s) {
  if (s == "sum") return Objective::SumRate;
  if (s == "min") return Objective::MinRate;
  throw ParameterError(fmt::format("--objective must be sum or min (got '{}')", s));
}

Family parse_family(const std::string& s, Index nu, Index group_size) {
  if (s == "zf") return Family::zf();
  if (s == "gzfdp") return nu == 0 ? Family::zf() : Family::gzfdp(nu);
  if (s == "zfdp") return Family::zfdp();
  if (s == "ugdp") return Family::ugdp(group_size);
  throw ParameterError(fmt::format("--family must be zf, gzfdp, zfdp or ugdp (got '{}')", s));
}

std::string perm_text(const std::vector<Index>& perm) {
  std::string out;
  for (Index p : perm) out += fmt::format("{}{}", out.empty() ? "" : " ", p + 1);
  return out;
}

// Depth of the band the ordering heuristics target for a family.
Index target_depth(const Family& f, Index n_users) {
  switch (f.kind) {
    case Family::Kind::Zf: return 0;
    case Family::Kind::GzfDp: return f.param;
    case Family::Kind::ZfDp: return n_users - 1;
    case Family::Kind::UgDp: return f.param - 1;
  }
  return 0;
}

void validate_family(const Family& f, Index n_users) {
  if (f.kind == Family::Kind::GzfDp && (f.param < 0 || f.param > n_users - 1)) {
    throw ParameterError(fmt::format("--nu must lie in [0, {}] for N={}", n_users - 1, n_users));
  }
  if (f.kind == Family::Kind::UgDp && (f.param < 1 || n_users % f.param != 0)) {
    throw ParameterError(
        fmt::format("--group-size {} must be positive and divide N={}", f.param, n_users));
  }
}

// ---------------------------------------------------------------- rates

struct RatesArgs {
  std::string channel;
  std::string family = "gzfdp";
  Index nu = 1;
  Index group_size = 2;
  std::string objective = "sum";
  std::string pt_db = "10";
  double n0 = 1.0;
  std::string ordering = "identity";
  std::optional<std::string> seed;
  std::string out;
  std::string dump_f;
  std::string dump_p;
};

UserOrdering pick_ordering(const std::string& name, const ChannelMatrix& h,
                           const GramGeometry& gram, const Family& family, Objective objective,
                           double power, double n0, std::uint64_t seed) {
  const Index n = h.n_users();
  if (name == "identity") return identity_ordering(n);
  if (name == "alg1") return order_alg1(gram, target_depth(family, n));
  if (name == "alg2") return order_alg2(gram);
  if (name == "brute") {
    return order_bruteforce_by(
        n,
        [&](std::span<const Index> perm) {
          UserOrdering o;
          o.perm.assign(perm.begin(), perm.end());
          return build_precoder(apply_ordering(h, o), gram.permuted(perm), family, objective,
                                power, n0)
              .objective_value();
        },
        objective);
  }
  if (name == "random" || name.rfind("random:", 0) == 0) {
    std::uint64_t k = 0;
    if (name.size() > 7) k = parse_seed(name.substr(7), "random ordering index");
    return order_random(n, derive_stream(seed, k));
  }
  throw ParameterError(
      fmt::format("--ordering must be identity, alg1, alg2, brute or random:<k> (got '{}')", name));
}

int cmd_rates(const RatesArgs& a) {
  const Family family = parse_family(a.family, a.nu, a.group_size);
  const Objective objective = parse_objective(a.objective);
  const double power_db = parse_power_db(a.pt_db);
  check_noise(a.n0);
  const std::uint64_t seed = resolve_seed(a.seed);
  announce(seed, fnv1a_hex(fmt::format("rates\n{}\n{}:{}\n{:.17g}\n{:.17g}\n{}\n", a.channel,
                                       family.label(), to_string(objective), power_db, a.n0,
                                       a.ordering)));

  const ChannelMatrix h0 = load_channel_fixture(a.channel);
  validate_family(family, h0.n_users());
  const double power = db_to_linear(power_db);
  const GramGeometry gram0 = GramGeometry::build(h0, a.n0);
  const UserOrdering ord =
      pick_ordering(a.ordering, h0, gram0, family, objective, power, a.n0, seed);
  const ChannelMatrix h = apply_ordering(h0, ord);
  const GramGeometry gram = gram0.permuted(ord.perm);
  const PrecoderSolution s = build_precoder(h, gram, family, objective, power, a.n0);

  const double residual = std::abs(power_trace(s.effective, gram.gram()) - power) / power;
  const bool per_user_levels = s.water_levels.size() == s.user_rates.size() &&
                               objective == Objective::MinRate;
  fmt::print("users {}  antennas {}  P_T {:.6g} dB  N0 {:.6g}\n", h.n_users(), h.n_antennas(),
             power_db, a.n0);
  fmt::print("ordering {}\n", perm_text(ord.perm));
  fmt::print("{:>4}  {:>6}  {:>14}  {:>14}{}\n", "pos", "user", "rate_bits", "f_nn",
             per_user_levels ? fmt::format("  {:>14}", "water_level") : "");
  for (Index k = 0; k < h.n_users(); ++k) {
    fmt::print("{:>4}  {:>6}  {:>14.9f}  {:>14.9f}{}\n", k + 1, ord.perm[static_cast<std::size_t>(k)] + 1,
               s.user_rates(k), s.diag_gains(k),
               per_user_levels ? fmt::format("  {:>14.9f}", s.water_levels(k)) : "");
  }
  fmt::print("sum_rate {:.9f}\nmin_rate {:.9f}\n", s.sum_rate, s.min_rate);
  if (!per_user_levels && s.water_levels.size() > 0) {
    fmt::print("water_level {:.9f}\n", s.water_levels(0));
  }
  fmt::print("power_residual {:.3e}\n", residual);

  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw IoError(fmt::format("cannot write '{}'", a.out));
    out << "position,user,rate_bits,f_nn\n";
    for (Index k = 0; k < h.n_users(); ++k) {
      out << fmt::format("{},{},{:.17g},{:.17g}\n", k + 1, ord.perm[static_cast<std::size_t>(k)] + 1,
                         s.user_rates(k), s.diag_gains(k));
    }
    if (!out) throw IoError(fmt::format("write failed for '{}'", a.out));
  }
  if (!a.dump_f.empty()) write_channel_fixture(s.effective, std::filesystem::path(a.dump_f));
  if (!a.dump_p.empty()) write_channel_fixture(s.precoder, std::filesystem::path(a.dump_p));
  return kOk;
}

// ---------------------------------------------------------------- order

struct OrderArgs {
  std::string channel;
  std::vector<Index> nus{1};
  std::string objective = "sum";
  std::vector<std::string> methods{"identity", "alg1", "alg2", "brute", "random"};
  std::string pt_db = "10";
  double n0 = 1.0;
  std::optional<std::string> seed;
  bool all = false;
};

int cmd_order(const OrderArgs& a) {
  const Objective objective = parse_objective(a.objective);
  const double power_db = parse_power_db(a.pt_db);
  check_noise(a.n0);
  const std::uint64_t seed = resolve_seed(a.seed);
  std::string key = fmt::format("order\n{}\n{}\n{:.17g}\n{:.17g}\n", a.channel,
                                to_string(objective), power_db, a.n0);
  for (Index nu : a.nus) key += fmt::format("nu={}\n", nu);
  for (const auto& m : a.methods) key += m + "\n";
  announce(seed, fnv1a_hex(key));

  for (const auto& m : a.methods) {
    if (m != "identity" && m != "alg1" && m != "alg2" && m != "brute" && m != "random") {
      throw ParameterError(
          fmt::format("unknown method '{}' (identity, alg1, alg2, brute, random)", m));
    }
    if (m == "alg2" && objective == Objective::SumRate) {
      fmt::print(stderr, "warning: alg2 targets the minimum user-rate objective\n");
    }
  }

  const ChannelMatrix h = load_channel_fixture(a.channel);
  const Index n = h.n_users();
  for (Index nu : a.nus) validate_family(Family::gzfdp(nu), n);
  const double power = db_to_linear(power_db);
  const GramGeometry gram = GramGeometry::build(h, a.n0);
  const bool brute_ok = n <= kMaxBruteForceUsers;

  fmt::print("{:>8}  {:>3}  {:>14}  {}\n", "method", "nu", to_string(objective), "ordering");
  for (Index nu : a.nus) {
    for (const auto& m : a.methods) {
      UserOrdering ord;
      if (m == "identity") {
        ord = identity_ordering(n);
      } else if (m == "alg1") {
        ord = order_alg1(gram, nu);
      } else if (m == "alg2") {
        ord = order_alg2(gram);
      } else if (m == "random") {
        ord = order_random(n, derive_stream(seed, static_cast<std::uint64_t>(nu)));
      } else if (!brute_ok) {
        fmt::print(stderr, "note: brute force skipped, N={} exceeds {}\n", n, kMaxBruteForceUsers);
        continue;
      } else {
        ord = order_bruteforce(gram, nu, objective, power, a.n0);
      }
      const double value = score_ordering(gram, nu, ord.perm, objective, power, a.n0);
      fmt::print("{:>8}  {:>3}  {:>14.9f}  {}\n", m, nu, value, perm_text(ord.perm));
    }
  }

  if (a.all) {
    if (!brute_ok) {
      throw CapabilityError(fmt::format("--all enumerates N! orderings and needs N <= {}",
                                        kMaxBruteForceUsers));
    }
    std::vector<std::vector<double>> columns;
    for (Index nu : a.nus) {
      columns.push_back(score_all_orderings(n, [&](std::span<const Index> perm) {
        return score_ordering(gram, nu, perm, objective, power, a.n0);
      }));
    }
    fmt::print("\n{:>6}  {:<{}}", "index", "ordering", 2 * n);
    for (Index nu : a.nus) fmt::print("  {:>14}", fmt::format("nu={}", nu));
    fmt::print("\n");
    for (std::size_t k = 0; k < columns.front().size(); ++k) {
      fmt::print("{:>6}  {:<{}}", k + 1, perm_text(kth_permutation(static_cast<int>(n), k)), 2 * n);
      for (const auto& c : columns) fmt::print("  {:>14.9f}", c[k]);
      fmt::print("\n");
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string spec;
  std::string out;
  std::optional<int> trials;
  std::optional<std::string> seed;
  bool serial = false;
};

int cmd_sweep(const SweepArgs& a) {
  ExperimentSpec spec = load_spec(a.spec);
  if (a.trials) spec.trials = *a.trials;
  spec.seed = resolve_seed(a.seed, spec.seed);
  announce(*spec.seed, spec_hash(spec));
  const RateReport report = run_experiment(spec, a.serial ? Exec::Serial : Exec::Parallel);
  if (report.failed_trials > 0) {
    fmt::print(stderr, "excluded {} rank-deficient trial(s) of {}\n", report.failed_trials,
               report.attempted_trials);
  }
  if (a.out.empty()) {
    fmt::print("{}", report_csv(report));
  } else {
    emit_report(report, a.out);
  }
  return kOk;
}

// ---------------------------------------------------------------- fdmimo

struct FdMimoArgs {
  FdMimoGeometry geom;
  std::string pt_db = "80";
  double n0 = 1.0;
  std::string out;
  std::optional<std::string> seed;
};

int cmd_fdmimo(const FdMimoArgs& a) {
  const double power_db = parse_power_db(a.pt_db);
  check_noise(a.n0);
  validate(a.geom);
  const auto& g = a.geom;
  const std::uint64_t seed = resolve_seed(a.seed);
  announce(seed, fnv1a_hex(fmt::format(
                     "fdmimo\n{}x{}:{:.17g}:{:.17g}:{:.17g}:{:.17g}:{:.17g}:{}\n{:.17g}\n{:.17g}\n",
                     g.array_rows, g.array_cols, g.element_spacing, g.carrier_hz, g.bs_height_m,
                     g.first_user_distance_m, g.user_spacing_m, g.n_users, power_db, a.n0)));

  const ChannelMatrix h = gen_fdmimo_los(g);
  if (!a.out.empty()) write_channel_fixture(h.entries, std::filesystem::path(a.out));
  const GramGeometry gram = GramGeometry::build(h, a.n0);
  const double power = db_to_linear(power_db);
  const Index n = h.n_users();

  std::vector<Family> families{Family::zf()};
  for (Index nu : {1, 3}) {
    if (nu < n) families.push_back(Family::gzfdp(nu));
  }
  if (n % 4 == 0) families.push_back(Family::ugdp(4));
  families.push_back(Family::zfdp());

  fmt::print("users {}  antennas {}  P_T {:.6g} dB  N0 {:.6g}\n", n, h.n_antennas(), power_db, a.n0);
  fmt::print("{:>14}  {:>14}  {:>14}\n", "precoder", "sum_rate", "min_rate");
  for (const Family& f : families) {
    const double sum = build_precoder(h, gram, f, Objective::SumRate, power, a.n0).sum_rate;
    const double min = build_precoder(h, gram, f, Objective::MinRate, power, a.n0).min_rate;
    fmt::print("{:>14}  {:>14.9f}  {:>14.9f}\n", f.label(), sum, min);
  }
  return kOk;
}

// ---------------------------------------------------------------- fixture

struct FixtureArgs {
  std::string model = "iid";
  Index users = 4;
  Index antennas = 4;
  double beta_t = 0.0;
  double beta_r = 0.0;
  std::optional<std::string> seed;
  std::string out;
  std::string channel;
};

int cmd_fixture_write(const FixtureArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  announce(seed, fnv1a_hex(fmt::format("fixture-write\n{}\n{}x{}\n{:.17g}:{:.17g}\n", a.model,
                                       a.users, a.antennas, a.beta_t, a.beta_r)));
  if (a.users < 1 || a.antennas < 1) throw ParameterError("--users and --antennas must be >= 1");
  ChannelMatrix h;
  if (a.model == "iid") {
    h = gen_iid_gaussian(a.users, a.antennas, seed);
  } else if (a.model == "kronecker") {
    h = gen_kronecker_rayleigh(a.users, a.antennas, {a.beta_t, a.beta_r}, seed);
  } else {
    throw ParameterError(fmt::format("--model must be iid or kronecker (got '{}')", a.model));
  }
  if (a.out.empty()) {
    write_channel_fixture(h.entries, std::cout);
  } else {
    write_channel_fixture(h.entries, std::filesystem::path(a.out));
  }
  return kOk;
}

int cmd_fixture_read(const FixtureArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  announce(seed, fnv1a_hex("fixture-read\n" + a.channel + "\n"));
  const ChannelMatrix h = load_channel_fixture(a.channel);
  write_channel_fixture(h.entries, std::cout);
  return kOk;
}

int run_guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kIo;
  } catch (const RankError& e) {
    fmt::print(stderr, "error: {} (smallest singular value {:.3e})\n", e.what(),
               e.smallest_singular_value());
    return kNumeric;
  } catch (const NumericError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GZF-DP precoder simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto add_seed = [](CLI::App* sub, std::optional<std::string>& seed) {
    sub->add_option("--seed", seed, "64-bit seed (falls back to GZFDP_SEED, then entropy)");
  };

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "Precoder, power allocation and rates for one channel");
  rates->add_option("--channel", ra.channel, "Channel fixture file")->required();
  rates->add_option("--family", ra.family, "zf | gzfdp | zfdp | ugdp")->capture_default_str();
  rates->add_option("--nu", ra.nu, "Interfering depth for gzfdp")->capture_default_str();
  rates->add_option("--group-size", ra.group_size, "Group size for ugdp")->capture_default_str();
  rates->add_option("--objective", ra.objective, "sum | min")->capture_default_str();
  rates->add_option("--pt-db", ra.pt_db, "Transmit power in dB")->capture_default_str();
  rates->add_option("--n0", ra.n0, "Noise power")->capture_default_str();
  rates->add_option("--ordering", ra.ordering, "identity | alg1 | alg2 | brute | random:<k>")
      ->capture_default_str();
  rates->add_option("--out", ra.out, "Write per-user rates as CSV");
  rates->add_option("--dump-f", ra.dump_f, "Write F in fixture format");
  rates->add_option("--dump-p", ra.dump_p, "Write P in fixture format");
  add_seed(rates, ra.seed);

  OrderArgs oa;
  auto* order = app.add_subcommand("order", "Compare user-ordering methods on one channel");
  order->add_option("--channel", oa.channel, "Channel fixture file")->required();
  order->add_option("--nu", oa.nus, "Interfering depth(s)")->capture_default_str();
  order->add_option("--objective", oa.objective, "sum | min")->capture_default_str();
  order->add_option("--methods", oa.methods, "identity alg1 alg2 brute random")
      ->capture_default_str();
  order->add_option("--pt-db", oa.pt_db, "Transmit power in dB")->capture_default_str();
  order->add_option("--n0", oa.n0, "Noise power")->capture_default_str();
  order->add_flag("--all", oa.all, "Also list the objective of every ordering");
  add_seed(order, oa.seed);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment spec and write the rate report");
  sweep->add_option("--spec", sa.spec, "Experiment spec (YAML)")->required();
  sweep->add_option("--out", sa.out, "Report CSV path (stdout when omitted)");
  sweep->add_option("--trials", sa.trials, "Override the spec's trial count");
  sweep->add_flag("--serial", sa.serial, "Run the serial reference path");
  add_seed(sweep, sa.seed);

  FdMimoArgs fa;
  auto* fdmimo = app.add_subcommand("fdmimo", "Line-of-sight planar-array scenario");
  fdmimo->add_option("--rows", fa.geom.array_rows)->capture_default_str();
  fdmimo->add_option("--cols", fa.geom.array_cols)->capture_default_str();
  fdmimo->add_option("--spacing", fa.geom.element_spacing, "Element spacing in wavelengths")
      ->capture_default_str();
  fdmimo->add_option("--carrier-hz", fa.geom.carrier_hz)->capture_default_str();
  fdmimo->add_option("--height", fa.geom.bs_height_m, "Array height in metres")
      ->capture_default_str();
  fdmimo->add_option("--first-user", fa.geom.first_user_distance_m, "Metres")
      ->capture_default_str();
  fdmimo->add_option("--user-spacing", fa.geom.user_spacing_m, "Metres")->capture_default_str();
  fdmimo->add_option("--users", fa.geom.n_users)->capture_default_str();
  fdmimo->add_option("--pt-db", fa.pt_db, "Transmit power in dB")->capture_default_str();
  fdmimo->add_option("--n0", fa.n0, "Noise power")->capture_default_str();
  fdmimo->add_option("--out", fa.out, "Write the channel in fixture format");
  add_seed(fdmimo, fa.seed);

  FixtureArgs xa;
  auto* fixture = app.add_subcommand("fixture", "Channel fixture utilities");
  fixture->require_subcommand(1);
  auto* fwrite = fixture->add_subcommand("write", "Draw a random channel and write it");
  fwrite->add_option("--model", xa.model, "iid | kronecker")->capture_default_str();
  fwrite->add_option("--users", xa.users)->capture_default_str();
  fwrite->add_option("--antennas", xa.antennas)->capture_default_str();
  fwrite->add_option("--beta-t", xa.beta_t)->capture_default_str();
  fwrite->add_option("--beta-r", xa.beta_r)->capture_default_str();
  fwrite->add_option("--out", xa.out, "Output path (stdout when omitted)");
  add_seed(fwrite, xa.seed);
  auto* fread = fixture->add_subcommand("read", "Parse a fixture and print it back");
  fread->add_option("--channel", xa.channel, "Channel fixture file")->required();
  add_seed(fread, xa.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*rates) return run_guarded([&] { return cmd_rates(ra); });
  if (*order) return run_guarded([&] { return cmd_order(oa); });
  if (*sweep) return run_guarded([&] { return cmd_sweep(sa); });
  if (*fdmimo) return run_guarded([&] { return cmd_fdmimo(fa); });
  if (*fwrite) return run_guarded([&] { return cmd_fixture_write(xa); });
  if (*fread) return run_guarded([&] { return cmd_fixture_read(xa); });
  return kUsage;
}
