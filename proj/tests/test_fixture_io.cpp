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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gzfdp/channel.hpp"
#include "gzfdp/errors.hpp"
#include "support.hpp"

using namespace gzfdp;

namespace {
ChannelMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_channel_fixture(in);
}
}  // namespace

TEST_CASE("example 1 fixture loads exactly") {
  const auto h = test::example1();
  REQUIRE(h.n_users() == 4);
  REQUIRE(h.n_antennas() == 4);
  CHECK(h.entries(0, 0) == cplx(1, 4));
  CHECK(h.entries(1, 3) == cplx(2, 4));
  CHECK(h.entries(3, 3) == cplx(2, 2));
  CHECK(h.source == ChannelSource::Fixture);
}

TEST_CASE("scalar fixture") {
  const auto h = parse("1 1\n2 0\n");
  CHECK(h.entries(0, 0) == cplx(2, 0));
}

TEST_CASE("comments and blank lines are ignored") {
  const auto h = parse("# header\n\n2 2 # dims\n1 0 0 0\n# mid\n0 0 1 0\n");
  CHECK(h.entries == CMatrix::Identity(2, 2));
}

TEST_CASE("row count mismatch is a structural error") {
  CHECK_THROWS_AS(parse("4 4\n1 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0\n"),
                  StructuralError);
  CHECK_THROWS_AS(parse("2 2\n1 0 0 0\n0 0 1 0\n0 0 0 0\n"), StructuralError);
}

TEST_CASE("entry count mismatch is a structural error") {
  CHECK_THROWS_AS(parse("2 2\n1 0 0\n0 0 1 0\n"), StructuralError);
  CHECK_THROWS_AS(parse("1 2\n1 0 0 0 5 5\n"), StructuralError);
}

TEST_CASE("bad tokens report the line") {
  try {
    parse("2 2\n1 0 0 0\n0 x 1 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("two 2\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("0 3\n"), ParseError);
}

TEST_CASE("missing fixture file is an I/O error") {
  CHECK_THROWS_AS(load_channel_fixture("/nonexistent/ch.txt"), IoError);
}

TEST_CASE("write then read reproduces every bit") {
  const auto h = gen_iid_gaussian(3, 5, 42);
  std::ostringstream out;
  write_channel_fixture(h.entries, out);
  std::istringstream in(out.str());
  const auto back = parse_channel_fixture(in);
  CHECK(back.entries == h.entries);

  const auto path = std::filesystem::temp_directory_path() / "gzfdp_fixture_roundtrip.txt";
  write_channel_fixture(h.entries, path);
  CHECK(load_channel_fixture(path).entries == h.entries);
  std::filesystem::remove(path);
}
