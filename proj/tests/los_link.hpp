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

// Noiseless single-RRH link with geometric delay only: no fading, no
// shadowing, no interferers. Modulation is linear and every SS block lives in
// its own four symbols, so the transmitted frame is the data waveform plus a
// per-block waveform scaled by that block's beam amplitude. Both parts are
// modulated once, which makes a new train position cost one superposition.

#include <vector>

#include "hstpos/geometry.hpp"
#include "hstpos/link_budget.hpp"
#include "hstpos/numerology.hpp"
#include "hstpos/ofdm.hpp"
#include "hstpos/propagation.hpp"
#include "hstpos/ss_burst.hpp"
#include "hstpos/sync_estimator.hpp"

namespace testing_support {

using namespace hstpos;

class LosLink
{
public:
    LosLink(const RrhSite &site, int tx_elements, std::uint64_t seed, int frame_slots = 33)
        : site_(site), tx_elements_(tx_elements)
    {
        burst_ = burst_layout(sched_, num_);
        const int symbols = frame_slots * num_.symbols_per_slot;
        window_ = num_.samples_for_symbols(symbols);

        ResourceGrid full(num_.active_subcarriers, symbols);
        schedule_burst_set(sched_, num_, full, site.cell, seed);

        // Data-only frame: the block footprints carry zero.
        std::vector<double> zeros(burst_.blocks.size(), 0.0);
        ResourceGrid data = full;
        data.apply_weights(beam_weight_map(num_.active_subcarriers, symbols, burst_, zeros, 1.0));
        data_ = ofdm_modulate(data, num_, num_.nominal_scale());

        for (std::size_t i = 0; i < burst_.blocks.size(); ++i)
        {
            std::vector<double> one(burst_.blocks.size(), 0.0);
            one[i] = 1.0;
            ResourceGrid g = full;
            g.apply_weights(beam_weight_map(num_.active_subcarriers, symbols, burst_, one, 0.0));
            const Buffer x = ofdm_modulate(g, num_, num_.nominal_scale());
            blocks_.push_back(x.segment(burst_.blocks[i].start_sample, burst_.block_samples));
        }
    }

    // Received window for a train at `train`, delayed by the rounded
    // geometric delay.
    Buffer received(const Vec2 &train) const
    {
        const LosGeometry g = los_geometry(train, site_);
        UlaConfig ula{tx_elements_, 0.5, 0.0};
        Buffer tx = data_;
        ula.boresight = site_.panel_boresights[static_cast<std::size_t>(nearest_panel(site_.panel_boresights, g.aod))];
        tx *= std::sqrt(db2lin(panel_gain(ula, g.aod, g.aod)));
        for (std::size_t i = 0; i < burst_.blocks.size(); ++i)
        {
            const double steer = burst_.blocks[i].sweep_angle;
            ula.boresight =
                site_.panel_boresights[static_cast<std::size_t>(nearest_panel(site_.panel_boresights, steer))];
            tx.segment(burst_.blocks[i].start_sample, burst_.block_samples) +=
                std::sqrt(db2lin(panel_gain(ula, steer, g.aod))) * blocks_[i];
        }
        const Index delay = std::llround(g.distance * num_.sample_rate() / kSpeedOfLight);
        const std::vector<DelayedStream> streams{{std::move(tx), delay}};
        return superpose_rrhs(streams, -std::numeric_limits<double>::infinity(), 0, window_);
    }

    const Numerology &numerology() const { return num_; }
    const BurstSchedule &schedule() const { return sched_; }
    const BurstLayout &burst() const { return burst_; }
    const RrhSite &site() const { return site_; }
    Index window() const { return window_; }

private:
    RrhSite site_;
    int tx_elements_;
    Numerology num_;
    BurstSchedule sched_;
    BurstLayout burst_;
    Index window_ = 0;
    Buffer data_;
    std::vector<Buffer> blocks_;
};

inline RrhSite make_site(int id, Vec2 position)
{
    RrhSite s;
    s.id = id;
    s.position = position;
    s.panel_boresights = {deg2rad(-45.0), deg2rad(-135.0)};
    s.cell = {id % 3, id % 336};
    return s;
}

} // namespace testing_support
