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
#include <iosfwd>

#include "gzfdp/types.hpp"

namespace gzfdp {

enum class ChannelSource { Fixture, IidGaussian, KroneckerRayleigh, FdMimoLos };

const char* to_string(ChannelSource s) noexcept;

/// N x M broadcast channel. Row n is the channel of user n as seen from the
/// M transmit antennas.
struct ChannelMatrix {
  CMatrix entries;
  ChannelSource source = ChannelSource::Fixture;

  Index n_users() const noexcept { return entries.rows(); }
  Index n_antennas() const noexcept { return entries.cols(); }
};

/// Exponential correlation factors; both must lie in [0, 1).
struct CorrelationSpec {
  double beta_t = 0.0;
  double beta_r = 0.0;
};

/// Planar array serving users lined up perpendicular to the array plane.
/// Defaults are the 8x8, 2.4 GHz deployment with 8 users.
struct FdMimoGeometry {
  int array_rows = 8;
  int array_cols = 8;
  double element_spacing = 0.5;  // wavelengths
  double carrier_hz = 2.4e9;
  double bs_height_m = 20.0;
  double first_user_distance_m = 20.0;
  double user_spacing_m = 10.0;
  int n_users = 8;
};

inline constexpr double kSpeedOfLight = 299792458.0;

/// K x K matrix with entries beta^|i-j|. Throws ParameterError unless
/// beta is in [0, 1).
RMatrix exponential_correlation(Index k, double beta);

/// Hermitian positive semidefinite square root via eigendecomposition,
/// negative eigenvalues clamped to zero.
RMatrix psd_sqrt(const RMatrix& r);

/// Entries CN(0,1): real and imaginary parts independent N(0, 1/2). Filled
/// row by row, so the leading rows of a taller draw match a shorter one.
ChannelMatrix gen_iid_gaussian(Index n_users, Index n_antennas, std::uint64_t seed);

/// R_R^{1/2} H_iid R_T^{1/2}; with both betas zero the result equals
/// gen_iid_gaussian on the same seed entrywise.
ChannelMatrix gen_kronecker_rayleigh(Index n_users, Index n_antennas,
                                     const CorrelationSpec& corr, std::uint64_t seed);

/// Free-space line-of-sight channel, a * exp(-j 2 pi d / lambda) with
/// a = lambda / (4 pi d). Elements are enumerated row-major over the array;
/// the array centre sits at bs_height_m above ground and users stand on the
/// ground along the array boresight, the first one first_user_distance_m
/// from the array centre and the others user_spacing_m apart.
ChannelMatrix gen_fdmimo_los(const FdMimoGeometry& geom);

/// Validates geometry invariants; throws ParameterError.
void validate(const FdMimoGeometry& geom);

/// Text fixture: "N M" then N lines of M "re im" pairs; '#' starts a comment.
ChannelMatrix load_channel_fixture(const std::filesystem::path& path);
ChannelMatrix parse_channel_fixture(std::istream& in);
void write_channel_fixture(const CMatrix& m, std::ostream& out);
void write_channel_fixture(const CMatrix& m, const std::filesystem::path& path);

}  // namespace gzfdp
