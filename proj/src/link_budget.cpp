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

#include "hstpos/link_budget.hpp"

#include <algorithm>

namespace hstpos {

void LinkBudgetParams::validate() const
{
    if (!(carrier_freq > 0.0))
        throw ConfigError("link.carrier_freq", "must be positive");
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("link.bandwidth_hz", "must be positive");
    if (!(noise_figure_db >= 0.0))
        throw ConfigError("link.noise_figure_db", "must be non-negative");
    if (!std::isfinite(tx_power_dbm))
        throw ConfigError("link.tx_power_dbm", "must be finite");
}

double breakpoint_distance(double carrier_freq, const UmiHeights &h)
{
    // Effective heights are reduced by the 1 m environment height.
    return 4.0 * (h.bs - 1.0) * (h.ut - 1.0) * carrier_freq / kSpeedOfLight;
}

PathLoss path_loss(double distance, double carrier_freq, const UmiHeights &h)
{
    PathLoss out;
    if (distance < 1.0)
    {
        distance = 1.0;
        out.clamped = true;
    }
    const double f_ghz = carrier_freq / 1e9;
    const double d_bp = breakpoint_distance(carrier_freq, h);
    if (distance <= d_bp)
    {
        out.db = 32.4 + 21.0 * std::log10(distance) + 20.0 * std::log10(f_ghz);
    }
    else
    {
        const double dh = h.bs - h.ut;
        out.db = 32.4 + 40.0 * std::log10(distance) + 20.0 * std::log10(f_ghz) -
                 9.5 * std::log10(d_bp * d_bp + dh * dh);
    }
    return out;
}

void UlaConfig::validate() const
{
    if (num_elements < 1)
        throw ConfigError("num_elements", "must be at least 1");
    if (!(element_spacing > 0.0))
        throw ConfigError("element_spacing", "must be positive");
}

double array_factor(const UlaConfig &cfg, double steer_angle, double signal_angle)
{
    const int m = cfg.num_elements;
    if (m == 1)
        return 1.0;
    // Phase progression in sine space relative to the boresight.
    const double u = std::sin(signal_angle - cfg.boresight) - std::sin(steer_angle - cfg.boresight);
    const double psi = 2.0 * kPi * cfg.element_spacing * u;
    // Closed form of |sum_k exp(j k psi)| / M.
    const double den = std::sin(psi / 2.0);
    if (std::abs(den) < 1e-12)
        return 1.0;
    return std::min(1.0, std::abs(std::sin(m * psi / 2.0) / (m * den)));
}

double beam_gain(const UlaConfig &cfg, double steer_angle, double signal_angle)
{
    const double af = array_factor(cfg, steer_angle, signal_angle);
    const double lin = static_cast<double>(cfg.num_elements) * af * af;
    if (lin <= 0.0)
        return kBeamGainFloorDb;
    return std::max(kBeamGainFloorDb, lin2db(lin));
}

double panel_gain(const UlaConfig &cfg, double steer_angle, double signal_angle)
{
    if (std::abs(wrap_angle(signal_angle - cfg.boresight)) > kPi / 2.0)
        return kBeamGainFloorDb;
    return beam_gain(cfg, steer_angle, signal_angle);
}

double received_power(const LinkBudgetParams &link, double distance, double shadow_db, double g_tx_db,
                      double g_rx_db)
{
    return link.tx_power_dbm - path_loss(distance, link.carrier_freq).db + shadow_db + g_tx_db + g_rx_db;
}

double max_doppler(double speed, double carrier_freq)
{
    if (speed < 0.0)
        throw std::invalid_argument("max_doppler: speed must be non-negative");
    return speed * carrier_freq / kSpeedOfLight;
}

double noise_floor(const LinkBudgetParams &link)
{
    return link.noise_psd_dbm_hz + lin2db(link.bandwidth_hz) + link.noise_figure_db;
}

} // namespace hstpos
