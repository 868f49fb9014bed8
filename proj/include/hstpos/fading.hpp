// SPDX-License-Identifier: Apache-2.0
//
// hstpos: 5G NR synchronization-signal positioning of high-speed trains
// Copyright (C) 2026 The hstpos Authors
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
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hstpos/common.hpp"

namespace hstpos {

struct TdlTapSpec
{
    double normalized_delay;
    double power_db;
    bool los; // deterministic LOS phasor rather than Rayleigh
};

// TDL-D power delay profile (13 taps; the first tap is split into a LOS
// component and a Rayleigh component, giving a 13.3 dB K-factor).
const std::array<TdlTapSpec, 14> &tdl_d_profile();

inline constexpr double kTdlDKFactorDb = 13.3;

struct FadingParams
{
    bool enabled = true;
    double delay_spread = 20e-9; // RMS delay spread used to scale the normalized delays
    int num_sinusoids = 32;      // per Rayleigh component
    int update_stride = 64;      // samples between stored gain values

    void validate() const;
};

// Time-varying tapped delay line. Gains are stored every `stride` samples and
// linearly interpolated in between.
struct TdlRealization
{
    Eigen::VectorXd tap_delays;         // seconds
    Eigen::VectorXi tap_delay_samples;  // tap_delays rounded to the sample grid
    Eigen::MatrixXcd gains;             // taps x grid points
    Index stride = 1;
    Index num_samples = 0;
    double sample_rate = 1.0;
    double max_doppler = 0.0;
    double k_factor_db = kTdlDKFactorDb;

    Index num_taps() const { return gains.rows(); }
    cdouble gain(Index tap, Index n) const;
    Eigen::VectorXcd gains_at(Index n) const;
    // Sum over taps of |gain|^2 at sample n.
    double total_power(Index n) const { return gains_at(n).squaredNorm(); }

    // Time-invariant line with the given integer-sample delays and gains.
    static TdlRealization fixed(const std::vector<int> &delay_samples, const std::vector<cdouble> &tap_gains,
                                Index num_samples, double sample_rate);
};

// Draws a TDL-D realization covering `duration` seconds. Rayleigh components
// use sum-of-sinusoids Jakes synthesis; the LOS component of tap 1 rotates at
// `los_doppler` (defaults to max_doppler). Expected total power is 1.
TdlRealization tdl_d_taps(double duration, double sample_rate, double max_doppler, std::uint64_t seed,
                          const FadingParams &params = {}, std::optional<double> los_doppler = std::nullopt);

} // namespace hstpos
