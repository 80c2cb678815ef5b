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

#include "gzfdp/errors.hpp"
#include "gzfdp/gram.hpp"
#include "gzfdp/precoders.hpp"
#include "support.hpp"

using namespace gzfdp;

namespace {

struct Instance {
  ChannelMatrix h;
  GramGeometry g;
};

Instance make(Index n, Index m, std::uint64_t seed) {
  auto h = test::random_channel(n, m, seed);
  auto g = GramGeometry::build(h, 1.0);
  return {std::move(h), std::move(g)};
}

void check_band_structure(const CMatrix& f, Index nu) {
  for (Index r = 0; r < f.rows(); ++r) {
    for (Index c = 0; c < f.cols(); ++c) {
      if (c > r || r - c > nu) CHECK(f(r, c) == cplx(0.0));
    }
  }
}

void check_effective(const ChannelMatrix& h, const PrecoderSolution& s) {
  CHECK((h.entries * s.precoder - s.effective).norm() <= 1e-9 * s.effective.norm());
}

}  // namespace

TEST_CASE("identity channel gives symmetric rates") {
  const ChannelMatrix h{CMatrix::Identity(4, 4), ChannelSource::Fixture};
  const auto g = GramGeometry::build(h, 1.0);
  const double p = 7.0;
  const double n0 = 0.5;
  const double expected = std::log2(1.0 + p / (4 * n0));
  for (const auto& s : {build_zf(h, g, p, n0), build_gzfdp_sumrate(h, g, 2, p, n0),
                        build_gzfdp_minrate(h, g, 2, p, n0), build_zfdp(h, p, n0)}) {
    for (Index n = 0; n < 4; ++n) CHECK(s.user_rates(n) == doctest::Approx(expected));
  }
  const auto zf = build_zf(h, g, p, n0);
  const auto zfdp = build_zfdp(h, p, n0);
  CHECK((zf.effective - zfdp.effective).norm() < 1e-12);
  CHECK((zf.precoder - zfdp.precoder).norm() < 1e-12);
}

TEST_CASE("band structure, zero forcing and power equality") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [h, g] = make(6, 8, seed);
    const double p = 3.0 + static_cast<double>(seed);
    for (Index nu = 0; nu < 6; ++nu) {
      for (const auto& s :
           {build_gzfdp_sumrate(h, g, nu, p, 1.0), build_gzfdp_minrate(h, g, nu, p, 1.0)}) {
        check_band_structure(s.effective, nu);
        check_effective(h, s);
        CHECK(test::rel_err(power_trace(s.effective, g.gram()), p) < 1e-9);
        CHECK(test::rel_err(s.total_power, p) < 1e-9);
        for (Index n = 0; n < 6; ++n) {
          CHECK(s.effective(n, n).imag() == 0.0);
          CHECK(s.effective(n, n).real() >= 0.0);
        }
      }
    }
    for (const auto& s : {build_zfdp(h, p, 1.0), build_ugdp(h, 2, p, 1.0), build_ugdp(h, 3, p, 1.0),
                          build_zfdp(h, p, 1.0, Objective::MinRate)}) {
      check_band_structure(s.effective, 5);
      check_effective(h, s);
      CHECK(test::rel_err(power_trace(s.effective, g.gram()), p) < 1e-9);
    }
  }
}

TEST_CASE("trace equals the sum of per-column quadratic forms") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [h, g] = make(5, 5, 50 + seed);
    for (Index nu = 0; nu < 5; ++nu) {
      const auto s = build_gzfdp_sumrate(h, g, nu, 10.0, 1.0);
      double sum_quadratic = 0.0;
      double sum_levels = 0.0;
      for (Index n = 0; n < 5; ++n) {
        const Index e = clamp_up(n, nu, 5);
        const CVector col = s.effective.block(n, n, e - n + 1, 1);
        sum_quadratic += (col.adjoint() * g.principal_submatrix(n, nu) * col)(0, 0).real();
        sum_levels += s.diag_gains(n) * s.diag_gains(n) * g.schur_ghat(n, nu);
      }
      const double direct = power_trace(s.effective, g.gram());
      CHECK(test::rel_err(direct, sum_quadratic) < 1e-9);
      CHECK(test::rel_err(direct, sum_levels) < 1e-9);
    }
  }
}

TEST_CASE("water level solves the level equation") {
  const auto [h, g] = make(8, 8, 77);
  for (Index nu : {0, 1, 3, 7}) {
    const auto s = build_gzfdp_sumrate(h, g, nu, 5.0, 2.0);
    const double level = s.water_levels(0);
    double used = 0.0;
    for (Index n = 0; n < 8; ++n) used += std::max(level - g.schur_ghat(n, nu), 0.0);
    CHECK(used == doctest::Approx(5.0 / 2.0).epsilon(1e-12));
    for (Index n = 0; n < 8; ++n) {
      CHECK(s.user_rates(n) ==
            doctest::Approx(std::max(std::log2(level / g.schur_ghat(n, nu)), 0.0)));
    }
  }
}

TEST_CASE("depth zero is bitwise the zero-forcing precoder") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [h, g] = make(5, 7, 90 + seed);
    const auto zf = build_zf(h, g, 4.0, 1.0);
    const auto gz = build_gzfdp_sumrate(h, g, 0, 4.0, 1.0);
    CHECK(zf.user_rates == gz.user_rates);
    CHECK(zf.effective == gz.effective);
    CHECK(zf.precoder == gz.precoder);
    CHECK(zf.sum_rate == gz.sum_rate);
    CHECK(zf.family == Family::zf());
  }
}

TEST_CASE("full depth matches ZF-DP and a single group matches ZF-DP") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [h, g] = make(6, 6, 130 + seed);
    const auto zfdp = build_zfdp(h, 10.0, 1.0);
    CHECK(test::rel_err(build_gzfdp_sumrate(h, g, 5, 10.0, 1.0).sum_rate, zfdp.sum_rate) < 1e-9);
    CHECK(test::rel_err(build_ugdp(h, 6, 10.0, 1.0).sum_rate, zfdp.sum_rate) < 1e-9);
    CHECK(test::rel_err(build_gzfdp_minrate(h, g, 5, 10.0, 1.0).min_rate,
                        build_zfdp(h, 10.0, 1.0, Objective::MinRate).min_rate) < 1e-9);
  }
}

TEST_CASE("LQ factors reconstruct the channel") {
  const auto h = test::random_channel(4, 7, 3);
  const auto lq = lq_decompose(h.entries);
  CHECK((lq.r * lq.u - h.entries).norm() < 1e-12 * h.entries.norm());
  CHECK((lq.u * lq.u.adjoint() - CMatrix::Identity(4, 4)).norm() < 1e-12);
  for (Index n = 0; n < 4; ++n) {
    CHECK(lq.r(n, n).imag() == 0.0);
    CHECK(lq.r(n, n).real() > 0.0);
    for (Index c = n + 1; c < 4; ++c) CHECK(lq.r(n, c) == cplx(0.0));
  }
  CHECK_THROWS_AS(lq_decompose(CMatrix::Zero(3, 2)), DimensionError);
}

TEST_CASE("dominance chain on every realization") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [h, g] = make(8, 8, 600 + seed);
    for (Objective obj : {Objective::SumRate, Objective::MinRate}) {
      double prev = build_precoder(h, g, Family::zf(), obj, 100.0, 1.0).objective_value();
      const double ug = build_precoder(h, g, Family::ugdp(2), obj, 100.0, 1.0).objective_value();
      if (obj == Objective::SumRate) CHECK(prev <= ug * (1 + 1e-12));
      const double g1 = build_precoder(h, g, Family::gzfdp(1), obj, 100.0, 1.0).objective_value();
      CHECK(ug <= g1 * (1 + 1e-12));
      for (Index nu = 1; nu < 8; ++nu) {
        const double v = build_precoder(h, g, Family::gzfdp(nu), obj, 100.0, 1.0).objective_value();
        CHECK(prev <= v * (1 + 1e-12));
        prev = v;
      }
    }
  }
}

TEST_CASE("last users never gain rate when the depth grows") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [h, g] = make(7, 7, 700 + seed);
    for (Index nu = 0; nu + 1 < 7; ++nu) {
      const auto a = build_gzfdp_sumrate(h, g, nu, 20.0, 1.0);
      const auto b = build_gzfdp_sumrate(h, g, nu + 1, 20.0, 1.0);
      for (Index n = 7 - (nu + 1); n < 7; ++n) CHECK(b.user_rates(n) <= a.user_rates(n) + 1e-12);
    }
  }
}

TEST_CASE("banded channel saturates rates") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CMatrix hm = test::random_channel(6, 6, 800 + seed).entries;
    for (Index r = 0; r < 6; ++r) {
      for (Index c = 0; c < 6; ++c) {
        if (c > r || c < r - 1) hm(r, c) = 0.0;
      }
    }
    const ChannelMatrix h{hm, ChannelSource::Fixture};
    const auto g = GramGeometry::build(h, 1.0);
    const auto base = build_gzfdp_sumrate(h, g, 1, 10.0, 1.0);
    const auto base_min = build_gzfdp_minrate(h, g, 1, 10.0, 1.0);
    for (Index nu = 2; nu < 6; ++nu) {
      CHECK(test::rel_err(build_gzfdp_sumrate(h, g, nu, 10.0, 1.0).sum_rate, base.sum_rate) < 1e-9);
      CHECK(test::rel_err(build_gzfdp_minrate(h, g, nu, 10.0, 1.0).min_rate, base_min.min_rate) <
            1e-9);
    }
  }
}

TEST_CASE("min-rate mode equalises every user") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [h, g] = make(8, 8, 900 + seed);
    for (Index nu = 0; nu < 8; ++nu) {
      const auto s = build_gzfdp_minrate(h, g, nu, 30.0, 1.0);
      CHECK(s.user_rates.maxCoeff() - s.user_rates.minCoeff() <= 1e-9);
      const double expected = std::log2(1.0 + 30.0 / g.ghat_levels(nu).sum());
      CHECK(s.min_rate == doctest::Approx(expected).epsilon(1e-12));
      for (Index n = 0; n < 8; ++n) {
        CHECK(s.diag_gains(n) == doctest::Approx(std::sqrt(std::exp2(expected) - 1.0)));
      }
      CHECK(s.water_levels.size() == 8);
    }
    for (Index ng : {2, 4}) {
      const auto s = build_ugdp(h, ng, 30.0, 1.0, Objective::MinRate);
      CHECK(s.user_rates.maxCoeff() - s.user_rates.minCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("low power clips users to zero") {
  const auto [h, g] = make(6, 6, 41);
  const auto s = build_gzfdp_sumrate(h, g, 2, 1e-3, 1.0);
  int dry = 0;
  for (Index n = 0; n < 6; ++n) {
    if (s.diag_gains(n) == 0.0) {
      ++dry;
      CHECK(s.user_rates(n) == 0.0);
      CHECK(s.effective.col(n).norm() == 0.0);
    }
  }
  CHECK(dry > 0);
  CHECK(test::rel_err(power_trace(s.effective, g.gram()), 1e-3) < 1e-9);
}

TEST_CASE("invalid precoder parameters") {
  const auto [h, g] = make(4, 4, 1);
  CHECK_THROWS_AS(build_zf(h, g, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_zf(h, g, -1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_gzfdp_sumrate(h, g, 4, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_gzfdp_minrate(h, g, -1, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_ugdp(h, 3, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_zfdp(h, 1.0, 0.0), ParameterError);
}

TEST_CASE("rank-deficient group projection is rejected") {
  CMatrix hm = test::random_channel(4, 4, 2).entries;
  hm.row(3) = hm.row(0);
  CHECK_THROWS_AS(build_ugdp({hm, ChannelSource::Fixture}, 2, 10.0, 1.0), RankError);
  CHECK_THROWS_AS(build_zfdp({hm, ChannelSource::Fixture}, 10.0, 1.0), RankError);
}

TEST_CASE("example 1 values from an independent evaluation") {
  const auto h = test::example1();
  const auto g = GramGeometry::build(h, 1.0);
  const double p = db_to_linear(10.0);
  CHECK(p == doctest::Approx(10.0).epsilon(1e-15));

  const auto zf = build_zf(h, g, p, 1.0);
  CHECK(zf.sum_rate == doctest::Approx(17.855981299929645).epsilon(1e-12));
  const double zf_rates[] = {4.325716405694441, 4.822503095029229, 4.362649588152314,
                             4.345112211053661};
  for (Index n = 0; n < 4; ++n) CHECK(zf.user_rates(n) == doctest::Approx(zf_rates[n]).epsilon(1e-12));

  const auto g1 = build_gzfdp_sumrate(h, g, 1, p, 1.0);
  CHECK(g1.sum_rate == doctest::Approx(18.478345580072265).epsilon(1e-12));
  CHECK(std::abs(g1.effective(1, 0) - cplx(-1.139160353415, 2.337708213405)) < 1e-11);
  CHECK(std::abs(g1.effective(2, 1) - cplx(2.026960317491, 0.41456173762)) < 1e-11);
  CHECK(std::abs(g1.effective(3, 2) - cplx(0.48812764555, 0.606605229421)) < 1e-11);
  CHECK(g1.water_levels(0) == doctest::Approx(2.60826789319977).epsilon(1e-12));

  const auto g2 = build_gzfdp_sumrate(h, g, 2, p, 1.0);
  CHECK(g2.sum_rate == doctest::Approx(20.165777645659414).epsilon(1e-12));
  const auto g3 = build_gzfdp_sumrate(h, g, 3, p, 1.0);
  CHECK(build_zfdp(h, p, 1.0).sum_rate == doctest::Approx(g3.sum_rate).epsilon(1e-12));
  CHECK(g3.sum_rate == doctest::Approx(22.303414391635147).epsilon(1e-12));

  CHECK(build_gzfdp_minrate(h, g, 1, p, 1.0).min_rate ==
        doctest::Approx(4.5904146744349195).epsilon(1e-12));
  CHECK(build_gzfdp_minrate(h, g, 1, p, 1.0).min_rate >=
        build_gzfdp_minrate(h, g, 0, p, 1.0).min_rate);

  // Group-wise precoder: agrees with the published values to their 3 decimals.
  const auto ug = build_ugdp(h, 2, p, 1.0);
  CHECK(ug.sum_rate == doctest::Approx(18.206).epsilon(2e-3 / 18.206));
  const double ug_diag[] = {4.899, 5.217, 4.490, 4.389};
  for (Index n = 0; n < 4; ++n) CHECK(std::abs(std::abs(ug.effective(n, n)) - ug_diag[n]) < 2e-3);
  CHECK(std::abs(ug.effective(1, 0) - cplx(-1.140, 2.340)) < 2e-3);
  CHECK(std::abs(ug.effective(3, 2) - cplx(0.489, 0.607)) < 2e-3);
  CHECK(ug.effective(2, 1) == cplx(0.0));
}

TEST_CASE("family labels") {
  CHECK(Family::zf().label() == "zf");
  CHECK(Family::gzfdp(3).label() == "gzfdp[nu=3]");
  CHECK(Family::zfdp().label() == "zfdp");
  CHECK(Family::ugdp(4).label() == "ugdp[ng=4]");
}
