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

#include "hstpos/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hstpos/link_budget.hpp"

namespace hstpos {

namespace {
constexpr double kVelocityTolerance = 1e-9;
}

double TrackProfile::duration() const
{
    return std::accumulate(segments.begin(), segments.end(), 0.0,
                           [](double acc, const AccelSegment &s) { return acc + s.duration; });
}

void TrackProfile::validate() const
{
    if (!(max_velocity > 0.0))
        throw ConfigError("track.max_velocity", "must be positive");
    if (initial_velocity < 0.0 || initial_velocity > max_velocity + kVelocityTolerance)
        throw ConfigError("track.initial_velocity", "must lie in [0, max_velocity]");
    double v = initial_velocity;
    for (std::size_t i = 0; i < segments.size(); ++i)
    {
        const auto &s = segments[i];
        const std::string key = "track.segments[" + std::to_string(i) + "]";
        if (!(s.duration > 0.0))
            throw ConfigError(key, "duration must be strictly positive");
        if (!std::isfinite(s.acceleration))
            throw ConfigError(key, "acceleration must be finite");
        // Velocity is linear within a segment, so its extremes sit at the ends.
        v += s.acceleration * s.duration;
        if (v < -kVelocityTolerance)
            throw ConfigError(key, "velocity becomes negative");
        if (v > max_velocity + kVelocityTolerance * std::max(1.0, max_velocity))
            throw ConfigError(key, "velocity exceeds max_velocity");
    }
}

TrackProfile TrackProfile::long_haul()
{
    TrackProfile p;
    p.initial_position_x = 100.0;
    p.initial_velocity = 50.0;
    const double vmax = p.max_velocity;
    p.segments = {
        {vmax - 50.0, 1.0},
        {100.0, 0.0},
        {50.0, -0.8},
        {60.0, 0.0},
        {50.0, 0.8},
        {80.0, 0.0},
        {60.0, -1.0},
        {10.0, 0.0},
    };
    return p;
}

TrainKinematics kinematics_at(const TrackProfile &profile, double t)
{
    const double total = profile.duration();
    if (!(t >= 0.0) || t > total)
    {
        std::ostringstream os;
        os << "kinematics_at: t = " << t << " s outside the valid interval [0, " << total << "] s";
        throw OutOfRangeError(os.str());
    }

    double x = profile.initial_position_x;
    double v = profile.initial_velocity;
    double a = 0.0;
    double elapsed = 0.0;
    for (const auto &s : profile.segments)
    {
        a = s.acceleration;
        const double dt = std::min(s.duration, t - elapsed);
        if (dt < s.duration)
        {
            x += v * dt + 0.5 * a * dt * dt;
            v += a * dt;
            elapsed = t;
            break;
        }
        x += v * s.duration + 0.5 * a * s.duration * s.duration;
        v += a * s.duration;
        elapsed += s.duration;
    }

    TrainKinematics k;
    k.t = t;
    k.position = Vec2(x, 0.0);
    k.velocity = Vec2(std::max(v, 0.0), 0.0);
    k.acceleration = Vec2(a, 0.0);
    return k;
}

void DeploymentConfig::validate() const
{
    if (!(rrh_spacing > 0.0))
        throw ConfigError("deployment.rrh_spacing", "must be positive");
    if (!(rrh_offset_y > 0.0))
        throw ConfigError("deployment.rrh_offset_y", "must be positive");
    if (!(carrier_freq > 0.0))
        throw ConfigError("deployment.carrier_freq", "must be positive");
    if (!(track_length >= rrh_spacing))
        throw ConfigError("deployment.track_length", "must be at least rrh_spacing");
    if (panel_boresights.empty())
        throw ConfigError("deployment.panel_boresights_deg", "at least one panel required");
}

std::vector<RrhSite> deploy_rrhs(const DeploymentConfig &cfg)
{
    cfg.validate();
    const auto count = static_cast<int>(std::floor(cfg.track_length / cfg.rrh_spacing + 1e-9)) + 1;
    std::vector<RrhSite> sites;
    sites.reserve(count);
    for (int k = 0; k < count; ++k)
    {
        RrhSite s;
        s.id = k;
        s.position = Vec2(k * cfg.rrh_spacing, cfg.rrh_offset_y);
        s.panel_boresights = cfg.panel_boresights;
        s.cell = {k % 3, k % 336};
        s.tx_power_dbm = cfg.tx_power_dbm;
        sites.push_back(std::move(s));
    }
    return sites;
}

LosGeometry los_geometry(const Vec2 &train, const Vec2 &site)
{
    const Vec2 d = train - site;
    const double dist = d.norm();
    if (!(dist > 0.0))
        throw DegenerateGeometryError("los_geometry: train and RRH positions coincide");

    LosGeometry g;
    g.distance = dist;
    g.aod = std::atan2(d.y(), d.x());
    const double arrival = std::atan2(-d.y(), -d.x());
    const double nose = wrap_angle(arrival - kTrainNoseBoresight);
    const double tail = wrap_angle(arrival - kTrainTailBoresight);
    if (std::abs(tail) < std::abs(nose))
    {
        g.aoa = tail;
        g.rx_panel = 1;
        g.rx_boresight = kTrainTailBoresight;
    }
    else
    {
        g.aoa = nose;
        g.rx_panel = 0;
        g.rx_boresight = kTrainNoseBoresight;
    }
    return g;
}

int nearest_panel(std::span<const double> boresights, double angle)
{
    int best = 0;
    double best_off = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < boresights.size(); ++i)
    {
        const double off = std::abs(wrap_angle(angle - boresights[i]));
        if (off < best_off)
        {
            best_off = off;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<RrhSite> select_serving_rrhs(const Vec2 &train, std::span<const RrhSite> sites, std::size_t k,
                                         double carrier_freq)
{
    if (k == 0)
        throw std::invalid_argument("select_serving_rrhs: k must be at least 1");

    struct Ranked
    {
        double power;
        int id;
        std::size_t index;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i)
    {
        const double d = (train - sites[i].position).norm();
        ranked.push_back({sites[i].tx_power_dbm - path_loss(d, carrier_freq).db, sites[i].id, i});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked &a, const Ranked &b) {
        if (a.power != b.power)
            return a.power > b.power;
        return a.id < b.id;
    });

    std::vector<RrhSite> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i)
        out.push_back(sites[ranked[i].index]);
    return out;
}

} // namespace hstpos
