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
#include <json.hpp>

#include "gzfdp/errors.hpp"
#include "gzfdp/experiment.hpp"

namespace gzfdp {

namespace {

constexpr const char* kHeader = "sweep,label,mean_rate_bits,stderr,trials";

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(fmt::format("bad number '{}'", s), line);
}

}  // namespace

std::string report_csv(const RateReport& report) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : report.rows) {
    out += fmt::format("{:.17g},{},{:.17g},{:.17g},{}\n", r.sweep, r.label, r.mean, r.stderr_,
                       r.trials);
  }
  return out;
}

void emit_report(const RateReport& report, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write report '{}'", path.string()));
    out << report_csv(report);
    if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
  }
  nlohmann::ordered_json meta;
  meta["seed"] = report.seed;
  meta["spec_hash"] = report.spec_hash;
  meta["tool_version"] = report.tool_version;
  meta["sweep_axis"] = report.sweep_axis;
  meta["attempted_trials"] = report.attempted_trials;
  meta["failed_trials"] = report.failed_trials;
  auto meta_path = path;
  meta_path += ".meta.json";
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", meta_path.string()));
  out << meta.dump(2) << '\n';
}

std::vector<RateRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open report '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ParseError("missing CSV header", 1);
  std::vector<RateRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 5) throw ParseError("expected 5 fields", line_no);
    RateRow r;
    r.sweep = parse_double(fields[0], line_no);
    r.label = fields[1];
    r.mean = parse_double(fields[2], line_no);
    r.stderr_ = parse_double(fields[3], line_no);
    r.trials = static_cast<int>(parse_double(fields[4], line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gzfdp
