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

#include "hstpos/common.hpp"

namespace hstpos {

// Large-scale link parameters. Bandwidth is the bandwidth the noise is
// integrated over; the simulator uses the full sampled bandwidth.
struct LinkBudgetParams
{
    double carrier_freq = 30e9;      // Hz
    double tx_power_dbm = 33.0;      // dBm
    double noise_figure_db = 5.0;    // dB
    double noise_psd_dbm_hz = -174.0;
    double bandwidth_hz = 245.76e6;

    void validate() const;
};

// Antenna heights of the UMi street-canyon model; they only enter through the
// breakpoint distance.
struct UmiHeights
{
    double bs = 10.0;
    double ut = 2.5;
};

struct PathLoss
{
    double db = 0.0;
    bool clamped = false; // distance was below 1 m and has been clamped
};

double breakpoint_distance(double carrier_freq, const UmiHeights &h = {});

// UMi street-canyon LOS path loss.
PathLoss path_loss(double distance, double carrier_freq, const UmiHeights &h = {});

// Uniform linear array. Angles are in the global frame (radians); the array
// axis is perpendicular to the boresight.
struct UlaConfig
{
    int num_elements = 16;
    double element_spacing = 0.5; // wavelengths
    double boresight = 0.0;

    void validate() const;
};

inline constexpr double kBeamGainFloorDb = -40.0;

// Normalized array factor |AF|/M in [0, 1].
double array_factor(const UlaConfig &cfg, double steer_angle, double signal_angle);

// Beamforming gain (dB) = 10 log10(M |AF_norm|^2), floored at kBeamGainFloorDb.
double beam_gain(const UlaConfig &cfg, double steer_angle, double signal_angle);

// beam_gain for a planar panel: signals behind the panel (more than 90 degrees
// off boresight) get the floor.
double panel_gain(const UlaConfig &cfg, double steer_angle, double signal_angle);

// Average received power (dBm): P_T - L(d) + S + G_T + G_R.
double received_power(const LinkBudgetParams &link, double distance, double shadow_db, double g_tx_db,
                      double g_rx_db);

// Maximum Doppler shift |v| / lambda_c.
double max_doppler(double speed, double carrier_freq);

// Thermal noise floor (dBm) over link.bandwidth_hz.
double noise_floor(const LinkBudgetParams &link);

} // namespace hstpos
