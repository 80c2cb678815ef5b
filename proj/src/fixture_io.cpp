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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "gzfdp/channel.hpp"
#include "gzfdp/errors.hpp"

namespace gzfdp {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// from_chars is locale independent, unlike strtod / iostreams.
template <typename T>
T parse_number(std::string_view tok, int line, std::string_view field) {
  T value{};
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(fmt::format("cannot parse {} from '{}'", field, tok), line);
  }
  return value;
}

}  // namespace

ChannelMatrix parse_channel_fixture(std::istream& in) {
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  Index n = 0;
  Index m = 0;
  Index row = 0;
  ChannelMatrix h;
  h.source = ChannelSource::Fixture;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (!have_header) {
      if (tokens.size() != 2) {
        throw ParseError("header must be 'N M'", line_no);
      }
      n = parse_number<long long>(tokens[0], line_no, "N");
      m = parse_number<long long>(tokens[1], line_no, "M");
      if (n < 1 || m < 1) throw ParseError("N and M must be positive", line_no);
      h.entries.resize(n, m);
      have_header = true;
      continue;
    }

    if (row >= n) {
      throw StructuralError(
          fmt::format("line {}: more rows than the {} declared in the header", line_no, n));
    }
    if (tokens.size() != static_cast<std::size_t>(2 * m)) {
      throw StructuralError(fmt::format(
          "line {}: row {} has {} numbers, expected {} ({} complex entries)", line_no,
          row + 1, tokens.size(), 2 * m, m));
    }
    for (Index k = 0; k < m; ++k) {
      const auto col = static_cast<std::size_t>(k);
      const double re =
          parse_number<double>(tokens[2 * col], line_no, fmt::format("re of entry {}", k + 1));
      const double im = parse_number<double>(tokens[2 * col + 1], line_no,
                                             fmt::format("im of entry {}", k + 1));
      h.entries(row, k) = cplx(re, im);
    }
    ++row;
  }

  if (!have_header) throw ParseError("empty fixture: missing 'N M' header", 0);
  if (row != n) {
    throw StructuralError(
        fmt::format("header declares {} rows but the body has {}", n, row));
  }
  return h;
}

ChannelMatrix load_channel_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open channel fixture '{}'", path.string()));
  return parse_channel_fixture(in);
}

void write_channel_fixture(const CMatrix& mat, std::ostream& out) {
  out << fmt::format("{} {}\n", mat.rows(), mat.cols());
  for (Index r = 0; r < mat.rows(); ++r) {
    std::string line;
    for (Index c = 0; c < mat.cols(); ++c) {
      if (c > 0) line += "  ";
      line += fmt::format("{:.17g} {:.17g}", mat(r, c).real(), mat(r, c).imag());
    }
    out << line << '\n';
  }
}

void write_channel_fixture(const CMatrix& mat, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  write_channel_fixture(mat, out);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace gzfdp
