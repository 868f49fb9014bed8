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

#include <cstdint>
#include <span>
#include <vector>

#include "hstpos/common.hpp"
#include "hstpos/geometry.hpp"
#include "hstpos/numerology.hpp"
#include "hstpos/resource_grid.hpp"
#include "hstpos/sequences.hpp"

namespace hstpos {

// Frequency/time footprint of one SS block. The 127 sync subcarriers are
// centered in the block span, and the block span is centered in the active band.
struct SsBlockLayout
{
    int prb_span = 24;
    int symbol_span = 4;
    int pss_symbol = 0;
    int sss_symbol = 2;

    int span_subcarriers() const { return 12 * prb_span; }
    int sync_offset() const { return (span_subcarriers() - kSyncSequenceLength) / 2; }
    int first_subcarrier(const Numerology &num) const { return (num.active_subcarriers - span_subcarriers()) / 2; }

    void validate(const Numerology &num) const;
};

enum class BlockContent
{
    full,      // PSS, SSS and placeholder PBCH
    sync_only, // PSS and SSS; PBCH positions stay zero
};

// One SS block as a span_subcarriers x symbol_span fragment. Every element of
// the fragment is marked occupied; elements that carry nothing are zero.
ResourceGrid assemble_ss_block(const SsBlockLayout &layout, const Eigen::VectorXd &pss, const Eigen::VectorXd &sss,
                               std::uint64_t seed, BlockContent content = BlockContent::full);

struct BurstSchedule
{
    int num_blocks = 64;
    int blocks_per_slot = 2;
    std::vector<int> block_start_symbols{2, 8};
    double sweep_start = 0.0;          // rad
    double sweep_stop = -kPi;          // rad
    double burst_period = 0.1;         // s

    int num_slots() const { return (num_blocks + blocks_per_slot - 1) / blocks_per_slot; }
    int num_symbols(const Numerology &num) const { return num_slots() * num.symbols_per_slot; }
    // Beam direction of block i: cell-centered uniform grid over the sweep.
    double sweep_angle(int block) const;
    int block_symbol(int block, const Numerology &num) const;

    void validate(const Numerology &num, const SsBlockLayout &layout = {}) const;
};

struct BlockInfo
{
    int index = 0;
    int start_symbol = 0;
    Index start_sample = 0;
    double sweep_angle = 0.0;
};

struct BurstLayout
{
    std::vector<BlockInfo> blocks;
    Index min_spacing = 0;   // smallest start-sample spacing between any two blocks
    Index block_samples = 0; // samples spanned by one block (CPs included)
    int first_subcarrier = 0;
    int span_subcarriers = 288;
    int symbol_span = 4;
    int burst_symbols = 0;
    Index burst_samples = 0;
};

BurstLayout burst_layout(const BurstSchedule &sched, const Numerology &num, const SsBlockLayout &layout = {});

enum class DataFill
{
    none,
    full_buffer,
};

// Places every block of the burst into `grid` and, for full_buffer, fills all
// remaining elements with unit-power random 16-QAM.
BurstLayout schedule_burst_set(const BurstSchedule &sched, const Numerology &num, ResourceGrid &grid,
                               CellIdentity cell, std::uint64_t seed, DataFill fill = DataFill::full_buffer,
                               const SsBlockLayout &layout = {}, BlockContent content = BlockContent::full);

// Unit-power 16-QAM in every unoccupied element.
void fill_full_buffer(ResourceGrid &grid, std::uint64_t seed);

// Per-element amplitude weights: block i's footprint gets block_amplitude[i],
// everything else data_amplitude.
Eigen::MatrixXd beam_weight_map(int subcarriers, int symbols, const BurstLayout &burst,
                                std::span<const double> block_amplitude, double data_amplitude);

} // namespace hstpos
