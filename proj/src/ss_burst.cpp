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

#include "hstpos/ss_burst.hpp"

#include <algorithm>
#include <random>

#include "hstpos/rng.hpp"

namespace hstpos {

void SsBlockLayout::validate(const Numerology &num) const
{
    if (span_subcarriers() < kSyncSequenceLength)
        throw ConfigError("ss_block.prb_span", "block span cannot hold 127 sync subcarriers");
    if (span_subcarriers() > num.active_subcarriers)
        throw ConfigError("ss_block.prb_span", "block span exceeds the active band");
    if (symbol_span < 1 || pss_symbol < 0 || pss_symbol >= symbol_span || sss_symbol < 0 ||
        sss_symbol >= symbol_span || pss_symbol == sss_symbol)
        throw ConfigError("ss_block", "PSS/SSS symbols must be distinct and inside the block");
}

ResourceGrid assemble_ss_block(const SsBlockLayout &layout, const Eigen::VectorXd &pss, const Eigen::VectorXd &sss,
                               std::uint64_t seed, BlockContent content)
{
    if (pss.size() != kSyncSequenceLength || sss.size() != kSyncSequenceLength)
        throw std::invalid_argument("assemble_ss_block: sync sequences must have length 127");
    if (layout.span_subcarriers() < kSyncSequenceLength)
        throw std::invalid_argument("assemble_ss_block: layout cannot hold the sync sequences");

    const int span = layout.span_subcarriers();
    ResourceGrid block(span, layout.symbol_span);
    block.reserve(0, 0, span, layout.symbol_span);

    const int k0 = layout.sync_offset();
    for (int n = 0; n < kSyncSequenceLength; ++n)
    {
        block.set(k0 + n, layout.pss_symbol, pss(n), true);
        block.set(k0 + n, layout.sss_symbol, sss(n), true);
    }
    if (content == BlockContent::sync_only)
        return block;

    // Placeholder PBCH: QPSK on every element of the non-PSS symbols that is
    // not carrying SSS.
    Rng rng(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    const double a = 1.0 / std::sqrt(2.0);
    for (int l = 0; l < layout.symbol_span; ++l)
    {
        if (l == layout.pss_symbol)
            continue;
        for (int k = 0; k < span; ++k)
        {
            if (l == layout.sss_symbol && k >= k0 && k < k0 + kSyncSequenceLength)
                continue;
            const double re = bit(rng) ? a : -a;
            const double im = bit(rng) ? a : -a;
            block.set(k, l, {re, im}, true);
        }
    }
    return block;
}

double BurstSchedule::sweep_angle(int block) const
{
    return sweep_start + (sweep_stop - sweep_start) * (block + 0.5) / num_blocks;
}

int BurstSchedule::block_symbol(int block, const Numerology &num) const
{
    return (block / blocks_per_slot) * num.symbols_per_slot + block_start_symbols[block % blocks_per_slot];
}

void BurstSchedule::validate(const Numerology &num, const SsBlockLayout &layout) const
{
    if (num_blocks < 1)
        throw ConfigError("burst.num_blocks", "must be at least 1");
    if (blocks_per_slot < 1)
        throw ConfigError("burst.blocks_per_slot", "must be at least 1");
    if (static_cast<int>(block_start_symbols.size()) != blocks_per_slot)
        throw ConfigError("burst.block_start_symbols", "needs one entry per block in a slot");
    for (std::size_t i = 0; i < block_start_symbols.size(); ++i)
    {
        const int s = block_start_symbols[i];
        if (s < 0 || s + layout.symbol_span > num.symbols_per_slot)
            throw ConfigError("burst.block_start_symbols", "block does not fit in the slot");
        if (i > 0 && s < block_start_symbols[i - 1] + layout.symbol_span)
            throw ConfigError("burst.block_start_symbols", "blocks must be increasing and non-overlapping");
    }
    if (sweep_start == sweep_stop)
        throw ConfigError("burst.sweep_stop_deg", "sweep range must be non-empty");
    if (!(burst_period > 0.0))
        throw ConfigError("burst.period", "must be positive");
    // Every block must share one time-domain template, so no block may contain
    // an extended-CP symbol.
    for (int i = 0; i < num_blocks; ++i)
    {
        const int l0 = block_symbol(i, num);
        for (int l = l0; l < l0 + layout.symbol_span; ++l)
            if (num.cp_length(l) != num.cp_normal)
                throw ConfigError("burst.block_start_symbols",
                                  "block " + std::to_string(i) + " contains an extended-CP symbol");
    }
}

BurstLayout burst_layout(const BurstSchedule &sched, const Numerology &num, const SsBlockLayout &layout)
{
    sched.validate(num, layout);
    BurstLayout out;
    out.first_subcarrier = layout.first_subcarrier(num);
    out.symbol_span = layout.symbol_span;
    out.span_subcarriers = layout.span_subcarriers();
    out.burst_symbols = sched.num_symbols(num);
    out.burst_samples = num.samples_for_symbols(out.burst_symbols);
    out.blocks.reserve(sched.num_blocks);
    for (int i = 0; i < sched.num_blocks; ++i)
    {
        BlockInfo b;
        b.index = i;
        b.start_symbol = sched.block_symbol(i, num);
        b.start_sample = num.symbol_start(b.start_symbol);
        b.sweep_angle = sched.sweep_angle(i);
        out.blocks.push_back(b);
    }
    const int l0 = out.blocks.front().start_symbol;
    out.block_samples = num.symbol_start(l0 + layout.symbol_span) - num.symbol_start(l0);

    // Start samples are strictly increasing, so the minimum pairwise spacing
    // is the minimum consecutive spacing.
    out.min_spacing = std::numeric_limits<Index>::max();
    for (std::size_t i = 1; i < out.blocks.size(); ++i)
        out.min_spacing = std::min(out.min_spacing, out.blocks[i].start_sample - out.blocks[i - 1].start_sample);
    if (out.blocks.size() == 1)
        out.min_spacing = out.burst_samples - out.blocks.front().start_sample;
    return out;
}

void fill_full_buffer(ResourceGrid &grid, std::uint64_t seed)
{
    Rng rng(seed);
    std::uniform_int_distribution<int> level(0, 3);
    const double a = 1.0 / std::sqrt(10.0);
    constexpr double kLevels[4] = {-3.0, -1.0, 1.0, 3.0};
    for (int l = 0; l < grid.symbols(); ++l)
        for (int k = 0; k < grid.subcarriers(); ++k)
        {
            if (grid.occupied(k, l))
                continue;
            const double re = kLevels[level(rng)] * a;
            const double im = kLevels[level(rng)] * a;
            grid.set(k, l, {re, im});
        }
}

BurstLayout schedule_burst_set(const BurstSchedule &sched, const Numerology &num, ResourceGrid &grid,
                               CellIdentity cell, std::uint64_t seed, DataFill fill, const SsBlockLayout &layout,
                               BlockContent content)
{
    layout.validate(num);
    BurstLayout burst = burst_layout(sched, num, layout);
    if (grid.subcarriers() != num.active_subcarriers || grid.symbols() < burst.burst_symbols)
        throw std::invalid_argument("schedule_burst_set: grid does not match the numerology/burst length");

    const Eigen::VectorXd pss = gen_pss(cell.pss_id);
    const Eigen::VectorXd sss = gen_sss(cell.sss_id, cell.pss_id);
    for (const auto &b : burst.blocks)
    {
        const auto block_seed = hash_seed({seed, static_cast<std::uint64_t>(b.index)});
        grid.insert(assemble_ss_block(layout, pss, sss, block_seed, content), burst.first_subcarrier,
                    b.start_symbol);
    }
    if (fill == DataFill::full_buffer)
        fill_full_buffer(grid, hash_seed({seed, static_cast<std::uint64_t>(Purpose::data)}));
    return burst;
}

Eigen::MatrixXd beam_weight_map(int subcarriers, int symbols, const BurstLayout &burst,
                                std::span<const double> block_amplitude, double data_amplitude)
{
    if (block_amplitude.size() != burst.blocks.size())
        throw std::invalid_argument("beam_weight_map: one amplitude per block required");
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(subcarriers, symbols, data_amplitude);
    for (std::size_t i = 0; i < burst.blocks.size(); ++i)
    {
        const auto &b = burst.blocks[i];
        w.block(burst.first_subcarrier, b.start_symbol, burst.span_subcarriers, burst.symbol_span)
            .setConstant(block_amplitude[i]);
    }
    return w;
}

} // namespace hstpos
