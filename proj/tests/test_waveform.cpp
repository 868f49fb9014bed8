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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hstpos/numerology.hpp"
#include "hstpos/ofdm.hpp"
#include "hstpos/resource_grid.hpp"
#include "hstpos/sequences.hpp"
#include "hstpos/ss_burst.hpp"
#include "oracles.hpp"

using namespace hstpos;

namespace {

// Correlation magnitude of rx against ref at a single lag.
double corr_at(const Buffer &rx, const Buffer &ref, Index lag)
{
    const Index n = std::min(ref.size(), rx.size() - lag);
    return std::abs(rx.segment(lag, n).dot(ref.head(n)));
}

Buffer transmitted_burst(CellIdentity cell, std::uint64_t seed)
{
    const Numerology num;
    const BurstSchedule sched;
    ResourceGrid grid(num.active_subcarriers, sched.num_symbols(num));
    schedule_burst_set(sched, num, grid, cell, seed);
    return ofdm_modulate(grid, num);
}

} // namespace

TEST(Numerology, SubframeSampleCount)
{
    const Numerology num;
    EXPECT_DOUBLE_EQ(num.sample_rate(), 245.76e6);
    EXPECT_EQ(num.samples_per_subframe(), 224 * 1024 + 2 * 200 + 222 * 72);
    EXPECT_EQ(num.samples_per_subframe(), 245760);
    EXPECT_EQ(num.cp_length(0), 200);
    EXPECT_EQ(num.cp_length(112), 200);
    EXPECT_EQ(num.cp_length(1), 72);
    EXPECT_EQ(num.cp_length(224), 200);
}

TEST(NumerologyProperty, WholeSubframesModulateToExactLength)
{
    const Numerology num;
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(num.samples_for_symbols(n * num.symbols_per_subframe()), n * 245760);
    // Symbol starts are the running sum of symbol lengths.
    Index acc = 0;
    for (int l = 0; l < 3 * num.symbols_per_subframe(); ++l)
    {
        ASSERT_EQ(num.symbol_start(l), acc);
        acc += num.symbol_length(l);
    }
}

TEST(Sequences, PssAlphabetAndAutocorrelation)
{
    for (int id = 0; id < kNumPssIds; ++id)
    {
        const Eigen::VectorXd p = gen_pss(id);
        ASSERT_EQ(p.size(), 127);
        for (int i = 0; i < 127; ++i)
            EXPECT_TRUE(p(i) == 1.0 || p(i) == -1.0);
        EXPECT_EQ(oracle::periodic_autocorrelation(p, 0), 127.0);
        for (int lag = 1; lag < 127; ++lag)
            EXPECT_EQ(oracle::periodic_autocorrelation(p, lag), -1.0) << "pss " << id << " lag " << lag;
    }
}

TEST(Sequences, PssIdentitiesDiffer)
{
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
        {
            const int differ = static_cast<int>((gen_pss(a).array() != gen_pss(b).array()).count());
            EXPECT_GE(differ, static_cast<int>(0.4 * 127));
        }
}

TEST(Sequences, AllSssDistinctAndBelowPeak)
{
    std::vector<Eigen::VectorXd> all;
    std::set<std::vector<double>> unique;
    for (int pss = 0; pss < 3; ++pss)
        for (int sss = 0; sss < kNumSssIds; ++sss)
        {
            const Eigen::VectorXd s = gen_sss(sss, pss);
            ASSERT_EQ(s.size(), 127);
            ASSERT_TRUE((s.array().abs() == 1.0).all());
            unique.insert(std::vector<double>(s.data(), s.data() + s.size()));
            all.push_back(s);
        }
    EXPECT_EQ(unique.size(), 1008u);

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int trial = 0; trial < 2000; ++trial)
    {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        EXPECT_LT(std::abs(all[i].dot(all[j])), 127.0);
    }
}

TEST(Sequences, RejectOutOfRangeIds)
{
    EXPECT_THROW(gen_pss(3), OutOfRangeError);
    EXPECT_THROW(gen_pss(-1), OutOfRangeError);
    EXPECT_THROW(gen_sss(336, 0), OutOfRangeError);
    EXPECT_THROW(gen_sss(0, 3), OutOfRangeError);
}

TEST(ResourceGrid, WriteOnceSemantics)
{
    ResourceGrid g(12, 4);
    g.set(3, 1, {1.0, 0.0});
    EXPECT_TRUE(g.occupied(3, 1));
    EXPECT_THROW(g.set(3, 1, {2.0, 0.0}), OccupancyConflict);
    g.set(3, 1, {2.0, 0.0}, true);
    EXPECT_EQ(g(3, 1), cdouble(2.0, 0.0));
    EXPECT_THROW(g.set(12, 0, {}), std::out_of_range);

    ResourceGrid frag(2, 2);
    frag.reserve(0, 0, 2, 2);
    EXPECT_THROW(g.insert(frag, 2, 0), OccupancyConflict);
    EXPECT_NO_THROW(g.insert(frag, 5, 2));
    EXPECT_EQ(g.occupied_count(), 5);
}

TEST(SsBlock, PlacementAndPower)
{
    const SsBlockLayout layout;
    const auto pss = gen_pss(1);
    const auto sss = gen_sss(77, 1);
    const auto block = assemble_ss_block(layout, pss, sss, 42);
    ASSERT_EQ(block.subcarriers(), 288);
    ASSERT_EQ(block.symbols(), 4);
    const int k0 = layout.sync_offset();
    for (int k = 0; k < 127; ++k)
    {
        EXPECT_EQ(block(k0 + k, layout.pss_symbol), cdouble(pss(k), 0.0));
        EXPECT_EQ(block(k0 + k, layout.sss_symbol), cdouble(sss(k), 0.0));
    }
    // PSS symbol carries nothing outside the sync subcarriers.
    for (int k = 0; k < 288; ++k)
        if (k < k0 || k >= k0 + 127)
        {
            EXPECT_EQ(block(k, layout.pss_symbol), cdouble(0.0, 0.0));
        }

    double power = 0.0;
    int nonzero = 0;
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 288; ++k)
            if (block(k, l) != cdouble(0.0, 0.0))
            {
                power += std::norm(block(k, l));
                ++nonzero;
            }
    EXPECT_NEAR(power / nonzero, 1.0, 1e-9);

    const auto sync = assemble_ss_block(layout, pss, sss, 42, BlockContent::sync_only);
    EXPECT_EQ((sync.values().array() != cdouble(0.0, 0.0)).count(), 254);
    EXPECT_THROW(assemble_ss_block(layout, pss.head(100), sss, 1), std::invalid_argument);
}

TEST(BurstSchedule, SweepAngles)
{
    const BurstSchedule sched;
    EXPECT_NEAR(rad2deg(sched.sweep_angle(0)), -1.40625, 1e-12);
    EXPECT_NEAR(rad2deg(sched.sweep_angle(63)), -178.59375, 1e-12);
    for (int i = 1; i < 64; ++i)
        EXPECT_LT(sched.sweep_angle(i), sched.sweep_angle(i - 1));
}

TEST(BurstSchedule, TwoMillisecondBurst)
{
    const Numerology num;
    const BurstSchedule sched;
    const auto b = burst_layout(sched, num);
    ASSERT_EQ(b.blocks.size(), 64u);
    EXPECT_EQ(sched.num_slots(), 32);
    EXPECT_EQ(b.burst_samples, 2 * num.samples_per_subframe());
    EXPECT_DOUBLE_EQ(static_cast<double>(b.burst_samples) / num.sample_rate(), 2e-3);
    // Block 63 ends inside slot 31.
    const auto &last = b.blocks.back();
    EXPECT_LE(last.start_symbol + 4, 32 * 14);
    EXPECT_GE(last.start_symbol, 31 * 14);
}

TEST(BurstScheduleProperty, MetadataConsistentWithSymbols)
{
    const Numerology num;
    const BurstSchedule sched;
    const auto b = burst_layout(sched, num);
    Index min_gap = std::numeric_limits<Index>::max();
    for (std::size_t i = 0; i < b.blocks.size(); ++i)
    {
        EXPECT_EQ(b.blocks[i].start_sample, num.symbol_start(b.blocks[i].start_symbol));
        EXPECT_EQ(b.blocks[i].start_symbol, (static_cast<int>(i) / 2) * 14 + (i % 2 == 0 ? 2 : 8));
        if (i > 0)
        {
            EXPECT_GT(b.blocks[i].start_sample, b.blocks[i - 1].start_sample);
            min_gap = std::min(min_gap, b.blocks[i].start_sample - b.blocks[i - 1].start_sample);
        }
        // Blocks never touch the extended-CP symbols.
        for (int l = 0; l < 4; ++l)
            EXPECT_EQ(num.cp_length(b.blocks[i].start_symbol + l), 72);
    }
    EXPECT_EQ(b.min_spacing, min_gap);
    EXPECT_EQ(b.blocks[0].start_sample, 2320);
    EXPECT_EQ(b.block_samples, 4 * (1024 + 72));
}

TEST(BurstSchedule, FullBufferFillsEveryElement)
{
    const Numerology num;
    const BurstSchedule sched;
    ResourceGrid grid(num.active_subcarriers, sched.num_symbols(num));
    schedule_burst_set(sched, num, grid, {0, 5}, 3);
    EXPECT_EQ(grid.occupied_count(), grid.values().size());
    ResourceGrid again(num.active_subcarriers, sched.num_symbols(num));
    schedule_burst_set(sched, num, again, {0, 5}, 3, DataFill::none);
    EXPECT_THROW(schedule_burst_set(sched, num, again, {0, 5}, 3), OccupancyConflict);
}

TEST(Ofdm, SingleSubcarrierIsConstantModulus)
{
    const Numerology num;
    ResourceGrid g(num.active_subcarriers, 2);
    g.set(123, 1, {1.0, 0.0});
    const Buffer x = ofdm_modulate(g, num, 1.0);
    const Index body = num.symbol_start(1) + num.cp_length(1);
    const Eigen::VectorXd mag = x.segment(body, num.fft_size).cwiseAbs();
    EXPECT_LT(mag.maxCoeff() - mag.minCoeff(), 1e-12);
    EXPECT_NEAR(mag(0), 1.0 / std::sqrt(1024.0), 1e-12);
    // Symbol 0 is empty.
    EXPECT_EQ(x.head(num.symbol_start(1)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(OfdmProperty, RoundTripAndEnergy)
{
    const Numerology num;
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 3; ++trial)
    {
        const int symbols = 20 + trial;
        ResourceGrid g(num.active_subcarriers, symbols);
        for (int l = 0; l < symbols; ++l)
            for (int k = 0; k < num.active_subcarriers; ++k)
                g.set(k, l, {n01(rng), n01(rng)});
        const double scale = num.nominal_scale();
        const Buffer x = ofdm_modulate(g, num, scale);
        ASSERT_EQ(x.size(), num.samples_for_symbols(symbols));

        const Eigen::MatrixXcd back = ofdm_demodulate(x, num, symbols, scale);
        EXPECT_LT((back - g.values()).norm() / g.values().norm(), 1e-10);

        // Symbol bodies carry grid energy times scale^2; the CP repeats a tail
        // of the body, so only bodies are summed here.
        double body_energy = 0.0;
        for (int l = 0; l < symbols; ++l)
            body_energy += x.segment(num.symbol_start(l) + num.cp_length(l), num.fft_size).squaredNorm();
        const double grid_energy = g.values().squaredNorm();
        EXPECT_NEAR(body_energy / (grid_energy * scale * scale), 1.0, 1e-9);
    }
}

TEST(Ofdm, NormalizedModulationHasUnitPower)
{
    const Buffer x = transmitted_burst({0, 0}, 1);
    EXPECT_NEAR(mean_power(x), 1.0, 1e-9);
    EXPECT_EQ(x.size(), 491520);
}

TEST(Ofdm, RejectsMismatchedGrid)
{
    const Numerology num;
    ResourceGrid g(500, 2);
    EXPECT_THROW(ofdm_modulate(g, num, 1.0), std::invalid_argument);
}

TEST(ReferenceWaveform, NonzeroOnlyInsideBlocks)
{
    const Numerology num;
    const BurstSchedule sched;
    const Buffer ref = reference_waveform({2, 100}, sched, num);
    const auto b = burst_layout(sched, num);
    ASSERT_EQ(ref.size(), b.burst_samples);
    Eigen::Array<bool, Eigen::Dynamic, 1> inside = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(ref.size(), false);
    for (const auto &blk : b.blocks)
        inside.segment(blk.start_sample, b.block_samples).setConstant(true);
    for (Index n = 0; n < ref.size(); ++n)
        if (!inside(n))
        {
            ASSERT_EQ(ref(n), cdouble(0.0, 0.0)) << "sample " << n;
        }
}

// A full burst repeats the same block 64 times, so its correlation has a
// peak at every block spacing. The matched-peak margin is therefore checked
// on a one-block schedule with the rest of the slot full of data.
TEST(ReferenceWaveform, MatchedPeakDominates)
{
    const Numerology num;
    BurstSchedule sched;
    sched.num_blocks = 1;
    sched.blocks_per_slot = 1;
    sched.block_start_symbols = {2};
    const CellIdentity cell{0, 12};
    const Buffer ref = reference_waveform(cell, sched, num);

    auto transmitted = [&](CellIdentity c) {
        ResourceGrid grid(num.active_subcarriers, sched.num_symbols(num));
        schedule_burst_set(sched, num, grid, c, 7);
        const Buffer tx = ofdm_modulate(grid, num);
        Buffer rx = Buffer::Zero(2 * tx.size());
        rx.head(tx.size()) = tx;
        return rx;
    };
    const Buffer rx = transmitted(cell);
    const Index symbol = num.symbol_length(1);

    const double peak = corr_at(rx, ref, 0);
    double worst = 0.0;
    for (Index lag = symbol; lag < ref.size(); ++lag)
        worst = std::max(worst, corr_at(rx, ref, lag));
    EXPECT_GE(lin2db(peak * peak / (worst * worst)), 10.0);

    const Buffer other = transmitted({1, 12});
    double mismatched = 0.0;
    for (Index lag = 0; lag < ref.size(); ++lag)
        mismatched = std::max(mismatched, corr_at(other, ref, lag));
    EXPECT_GE(lin2db(peak * peak / (mismatched * mismatched)), 6.0);
}

TEST(BlockTemplate, EqualsFirstBlockSpan)
{
    const Numerology num;
    const BurstSchedule sched;
    const Buffer ref = reference_waveform({1, 4}, sched, num);
    const auto b = burst_layout(sched, num);
    const Buffer t = block_template(ref, b);
    ASSERT_EQ(t.size(), b.block_samples);
    EXPECT_EQ((t - ref.segment(b.blocks[0].start_sample, b.block_samples)).norm(), 0.0);
    // Every block of the burst repeats the same template.
    for (const auto &blk : b.blocks)
        EXPECT_LT((ref.segment(blk.start_sample, b.block_samples) - t).norm(), 1e-9 * t.norm());
}
