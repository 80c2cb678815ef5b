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

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "gzfdp/errors.hpp"
#include "gzfdp/experiment.hpp"

namespace gzfdp {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <typename T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(fmt::format("field '{}' has an invalid value", key), line_of(n));
  }
}

template <typename T>
T get_or(const YAML::Node& parent, const std::string& key, T fallback) {
  const YAML::Node n = parent[key];
  return n ? scalar<T>(n, key) : fallback;
}

void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(fmt::format("unknown key '{}' in {}", key, where), line_of(kv.first));
  }
}

Objective parse_objective(const std::string& s, int line) {
  if (s == "sum") return Objective::SumRate;
  if (s == "min") return Objective::MinRate;
  throw ParseError(fmt::format("objective must be 'sum' or 'min' (got '{}')", s), line);
}

OrderingChoice parse_ordering(const std::string& s, int line) {
  OrderingChoice o;
  if (s == "identity") return o;
  if (s == "alg1") { o.kind = OrderingChoice::Kind::Alg1; return o; }
  if (s == "alg2") { o.kind = OrderingChoice::Kind::Alg2; return o; }
  if (s == "brute") { o.kind = OrderingChoice::Kind::BruteForce; return o; }
  if (s.rfind("random:", 0) == 0) {
    o.kind = OrderingChoice::Kind::RandomAvg;
    const std::string tail = s.substr(7);
    if (tail == "all") return o;
    try {
      std::size_t used = 0;
      o.samples = std::stoi(tail, &used);
      if (used == tail.size() && o.samples > 0) return o;
    } catch (const std::exception&) {
    }
  }
  throw ParseError(
      fmt::format("ordering must be identity|alg1|alg2|brute|random:<k>|random:all (got '{}')", s),
      line);
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  if (!root.IsMap()) throw ParseError("spec must be a YAML mapping", 0);
  reject_unknown(root, {"name", "seed", "trials", "noise_power", "channel", "sweep", "precoders"},
                 "spec");

  ExperimentSpec spec;
  spec.name = get_or<std::string>(root, "name", "");
  spec.trials = get_or<int>(root, "trials", 500);
  spec.noise_power = get_or<double>(root, "noise_power", 1.0);
  if (root["seed"]) spec.seed = scalar<std::uint64_t>(root["seed"], "seed");

  const YAML::Node ch = root["channel"];
  if (!ch || !ch.IsMap()) throw ParseError("missing 'channel' section", line_of(root));
  reject_unknown(ch, {"model", "users", "antennas", "beta_t", "beta_r", "path", "geometry"},
                 "channel");
  const auto model = get_or<std::string>(ch, "model", "");
  auto& cm = spec.channel;
  if (model == "fixture") {
    cm.kind = ChannelModel::Kind::Fixture;
    std::filesystem::path p = get_or<std::string>(ch, "path", "");
    cm.path = (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
    spec.trials = 1;
  } else if (model == "iid" || model == "kronecker") {
    cm.kind = model == "iid" ? ChannelModel::Kind::Iid : ChannelModel::Kind::Kronecker;
    cm.users = get_or<long long>(ch, "users", 0);
    cm.antennas = get_or<long long>(ch, "antennas", 0);
    cm.corr.beta_t = get_or<double>(ch, "beta_t", 0.0);
    cm.corr.beta_r = get_or<double>(ch, "beta_r", 0.0);
  } else if (model == "fdmimo") {
    cm.kind = ChannelModel::Kind::FdMimo;
    if (const YAML::Node g = ch["geometry"]) {
      reject_unknown(g,
                     {"array_rows", "array_cols", "element_spacing", "carrier_hz", "bs_height_m",
                      "first_user_distance_m", "user_spacing_m", "n_users"},
                     "channel.geometry");
      auto& geo = cm.geometry;
      geo.array_rows = get_or<int>(g, "array_rows", geo.array_rows);
      geo.array_cols = get_or<int>(g, "array_cols", geo.array_cols);
      geo.element_spacing = get_or<double>(g, "element_spacing", geo.element_spacing);
      geo.carrier_hz = get_or<double>(g, "carrier_hz", geo.carrier_hz);
      geo.bs_height_m = get_or<double>(g, "bs_height_m", geo.bs_height_m);
      geo.first_user_distance_m =
          get_or<double>(g, "first_user_distance_m", geo.first_user_distance_m);
      geo.user_spacing_m = get_or<double>(g, "user_spacing_m", geo.user_spacing_m);
      geo.n_users = get_or<int>(g, "n_users", geo.n_users);
    }
    spec.trials = 1;
  } else {
    throw ParseError(
        fmt::format("channel.model must be fixture|iid|kronecker|fdmimo (got '{}')", model),
        line_of(ch));
  }

  if (const YAML::Node sw = root["sweep"]) {
    reject_unknown(sw, {"axis", "from", "to", "step", "values", "power_db"}, "sweep");
    const auto axis = get_or<std::string>(sw, "axis", "none");
    auto& s = spec.sweep;
    s.power_db = get_or<double>(sw, "power_db", s.power_db);
    if (axis == "none") {
      s.axis = Sweep::Axis::None;
    } else if (axis == "power_db") {
      s.axis = Sweep::Axis::PowerDb;
    } else if (axis == "users") {
      s.axis = Sweep::Axis::Users;
    } else if (axis == "beta") {
      s.axis = Sweep::Axis::Beta;
    } else {
      throw ParseError(fmt::format("sweep.axis must be none|power_db|users|beta (got '{}')", axis),
                       line_of(sw));
    }
    if (const YAML::Node v = sw["values"]) {
      s.values = scalar<std::vector<double>>(v, "sweep.values");
    } else if (sw["from"] || sw["to"] || sw["step"]) {
      if (!sw["from"] || !sw["to"] || !sw["step"]) {
        throw ParseError("sweep range needs from, to and step", line_of(sw));
      }
      try {
        s.values = linear_grid(scalar<double>(sw["from"], "from"), scalar<double>(sw["to"], "to"),
                               scalar<double>(sw["step"], "step"));
      } catch (const ParameterError& e) {
        throw ParseError(e.what(), line_of(sw));
      }
    }
  }

  const YAML::Node pcs = root["precoders"];
  if (!pcs || !pcs.IsSequence()) throw ParseError("missing 'precoders' list", line_of(root));
  for (const auto& pn : pcs) {
    reject_unknown(pn, {"family", "nu", "group_size", "objective", "ordering"}, "precoder");
    PrecoderEntry e;
    const auto fam = get_or<std::string>(pn, "family", "");
    if (fam == "zf") {
      e.family = Family::zf();
    } else if (fam == "gzfdp") {
      if (!pn["nu"]) throw ParseError("gzfdp needs 'nu'", line_of(pn));
      e.family = Family::gzfdp(scalar<long long>(pn["nu"], "nu"));
    } else if (fam == "zfdp") {
      e.family = Family::zfdp();
    } else if (fam == "ugdp") {
      if (!pn["group_size"]) throw ParseError("ugdp needs 'group_size'", line_of(pn));
      e.family = Family::ugdp(scalar<long long>(pn["group_size"], "group_size"));
    } else {
      throw ParseError(fmt::format("family must be zf|gzfdp|zfdp|ugdp (got '{}')", fam),
                       line_of(pn));
    }
    e.objective = parse_objective(get_or<std::string>(pn, "objective", "sum"), line_of(pn));
    e.ordering = parse_ordering(get_or<std::string>(pn, "ordering", "identity"), line_of(pn));
    spec.precoders.push_back(e);
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open spec file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str(), path.parent_path());
}

}  // namespace gzfdp
