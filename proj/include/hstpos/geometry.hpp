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

#include <span>
#include <vector>

#include "hstpos/common.hpp"

namespace hstpos {

struct AccelSegment
{
    double duration = 0.0;     // s
    double acceleration = 0.0; // m/s^2
};

// Piecewise-constant acceleration motion along the straight track y = 0.
struct TrackProfile
{
    std::vector<AccelSegment> segments;
    double initial_position_x = 0.0;
    double initial_velocity = 0.0;
    double max_velocity = 400.0 / 3.6;

    double duration() const;
    void validate() const;

    // Accelerate-cruise-decelerate cycles over a ~43.6 km track peaking at
    // 400 km/h.
    static TrackProfile long_haul();
};

struct TrainKinematics
{
    double t = 0.0;
    Vec2 position = Vec2::Zero();
    Vec2 velocity = Vec2::Zero();
    Vec2 acceleration = Vec2::Zero();
};

TrainKinematics kinematics_at(const TrackProfile &profile, double t);

struct CellIdentity
{
    int pss_id = 0; // 0..2
    int sss_id = 0; // 0..335

    friend bool operator==(const CellIdentity &, const CellIdentity &) = default;
};

struct RrhSite
{
    int id = 0;
    Vec2 position = Vec2::Zero();
    std::vector<double> panel_boresights; // rad
    CellIdentity cell;
    double tx_power_dbm = 33.0;
};

struct DeploymentConfig
{
    double rrh_spacing = 500.0;
    double rrh_offset_y = 15.0;
    double track_length = 44000.0;
    double carrier_freq = 30e9;
    double tx_power_dbm = 33.0;
    std::vector<double> panel_boresights{deg2rad(-45.0), deg2rad(-135.0)};

    void validate() const;
};

std::vector<RrhSite> deploy_rrhs(const DeploymentConfig &cfg);

// Boresights of the train's two receive panels: nose (+x) and tail (-x).
inline constexpr double kTrainNoseBoresight = 0.0;
inline constexpr double kTrainTailBoresight = kPi;

struct LosGeometry
{
    double distance = 0.0;
    double aod = 0.0;     // direction RRH -> train, from +x
    double aoa = 0.0;     // direction train -> RRH, relative to the serving rx panel
    int rx_panel = 0;     // 0 = nose, 1 = tail
    double rx_boresight = kTrainNoseBoresight;
};

LosGeometry los_geometry(const Vec2 &train, const Vec2 &site);
inline LosGeometry los_geometry(const Vec2 &train, const RrhSite &site) { return los_geometry(train, site.position); }

// Index of the panel whose boresight is angularly closest to `angle`
// (lowest index on ties).
int nearest_panel(std::span<const double> boresights, double angle);

// The k sites with the highest average received power at `train` under zero
// shadowing and peak beam gains. Peak gains are identical for all sites, so the
// ranking reduces to P_T - L(d). Ties go to the lower site id.
std::vector<RrhSite> select_serving_rrhs(const Vec2 &train, std::span<const RrhSite> sites, std::size_t k,
                                         double carrier_freq);

} // namespace hstpos
