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

#include <gtest/gtest.h>

#include "hstpos/correlation.hpp"
#include "hstpos/sync_estimator.hpp"
#include "los_link.hpp"
#include "oracles.hpp"

using namespace hstpos;
using testing_support::LosLink;
using testing_support::make_site;

namespace {

Buffer random_buffer(Index n, std::mt19937_64 &rng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Buffer x(n);
    for (Index i = 0; i < n; ++i)
        x(i) = {g(rng), g(rng)};
    return x;
}

// Single-block layout with spacing K, block at sample 0.
BurstLayout one_block(Index k, double angle = 0.0)
{
    BurstLayout b;
    b.blocks = {BlockInfo{0, 0, 0, angle}};
    b.min_spacing = k;
    return b;
}

BlockSegment detected_segment(int index, double angle, double eta)
{
    BlockSegment s;
    s.block_index = index;
    s.sweep_angle = deg2rad(angle);
    s.eta = eta;
    s.detected = true;
    return s;
}

} // namespace

TEST(CrossCorrelate, ShiftProperty)
{
    std::mt19937_64 rng(1);
    const Buffer ref = random_buffer(256, rng);
    for (Index delay : {Index{0}, Index{100}})
    {
        Buffer rx = Buffer::Zero(256 + 400);
        rx.segment(delay, 256) = ref;
        const auto p = cross_correlate(rx, ref, 401, 1.0);
        Index argmax = -1;
        p.magnitude.maxCoeff(&argmax);
        EXPECT_EQ(argmax, delay);
        EXPECT_NEAR(p.magnitude(delay), ref.squaredNorm(), 1e-9 * ref.squaredNorm());
    }
    const auto zero = cross_correlate(Buffer::Zero(700), ref, 300, 1.0);
    EXPECT_EQ(zero.magnitude.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(cross_correlate(Buffer::Zero(300), ref, 100, 1.0), ContractViolation);
}

TEST(CorrelatorProperty, MatchesDirectSum)
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<Index> ref_len(1, 3000), lag_count(1, 9000);
    for (int trial = 0; trial < 12; ++trial)
    {
        const Index m = ref_len(rng), lags = lag_count(rng);
        const Buffer ref = random_buffer(m, rng);
        const Buffer rx = random_buffer(m + lags - 1 + trial, rng);
        const Eigen::VectorXd want = oracle::direct_correlation(rx, ref, lags);
        const Correlator corr(rx, lags, m, 1.0);
        const Eigen::VectorXd got = corr.correlate(ref).magnitude;
        ASSERT_EQ(got.size(), lags);
        EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-9 * want.maxCoeff()) << "M = " << m << " lags = " << lags;
    }
}

TEST(Correlator, BlockSizeCoversOneReference)
{
    EXPECT_EQ(next_pow2(1), 1);
    EXPECT_EQ(next_pow2(4385), 8192);
    const Index n = correlation_block_size(4384, 420000);
    EXPECT_GE(n, 4384);
    EXPECT_EQ(n & (n - 1), 0);
}

TEST(SegmentBlocks, ConstantProfileDetectsNothing)
{
    CorrelationProfile p;
    p.magnitude = Eigen::VectorXd::Constant(7672, 3.0);
    const auto segs = segment_blocks(p, one_block(7672));
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_EQ(segs[0].eta, 3.0);
    EXPECT_NEAR(segs[0].mu, 3.0, 1e-12);
    EXPECT_NEAR(segs[0].sigma, 0.0, 1e-12);
    EXPECT_FALSE(segs[0].detected);
}

TEST(SegmentBlocks, SingleSpikeIsDetected)
{
    const Index k = 7672;
    CorrelationProfile p;
    p.magnitude = Eigen::VectorXd::Zero(k);
    p.magnitude(1234) = 1.0;
    const auto segs = segment_blocks(p, one_block(k));
    const auto [mean, sd] = oracle::mean_std(p.magnitude);
    EXPECT_NEAR(segs[0].mu, 1.0 / k, 1e-15);
    EXPECT_NEAR(segs[0].mu, mean, 1e-15);
    EXPECT_NEAR(segs[0].sigma, sd, 1e-12);
    EXPECT_TRUE(segs[0].detected);
}

TEST(SegmentBlocks, SpacingSetsMaximumDelay)
{
    const Numerology num;
    BurstSchedule sched;
    sched.block_start_symbols = {1, 8};
    const auto b = burst_layout(sched, num);
    EXPECT_EQ(b.min_spacing, 7672);
    const double max_delay = static_cast<double>(b.min_spacing) / num.sample_rate();
    EXPECT_NEAR(max_delay, 31.2e-6, 0.05e-6);
    EXPECT_NEAR(max_delay * kSpeedOfLight, 9.4e3, 0.05e3);

    const auto def = burst_layout(BurstSchedule{}, num);
    EXPECT_EQ(def.min_spacing, 6 * 1096);
}

TEST(SegmentBlocksProperty, StatisticsMatchOracle)
{
    std::mt19937_64 rng(4);
    std::exponential_distribution<double> e(1.0);
    const auto b = burst_layout(BurstSchedule{}, Numerology{});
    CorrelationProfile p;
    p.magnitude.resize(correlation_lags(b));
    for (Index i = 0; i < p.size(); ++i)
        p.magnitude(i) = e(rng);
    for (double alpha : {3.0, 7.0})
    {
        const auto segs = segment_blocks(p, b, alpha);
        ASSERT_EQ(segs.size(), 64u);
        for (const auto &s : segs)
        {
            const Eigen::VectorXd v = p.magnitude.segment(s.start, b.min_spacing);
            const auto [mean, sd] = oracle::mean_std(v);
            EXPECT_NEAR(s.mu, mean, 1e-12);
            EXPECT_NEAR(s.sigma, sd, 1e-12);
            EXPECT_EQ(s.eta, v.maxCoeff());
            EXPECT_EQ(s.detected, s.eta > mean + alpha * sd);
        }
    }
}

TEST(EstimateAod, Examples)
{
    std::vector<BlockSegment> s{detected_segment(14, -42.1875, 1.0), detected_segment(15, -45.0, 1.0),
                                detected_segment(16, -47.8125, 1.0)};
    EXPECT_NEAR(rad2deg(*estimate_aod(s)), -45.0, 1e-12);

    s = {detected_segment(15, -45.0, 2.0), detected_segment(14, -42.1875, 1.0), detected_segment(16, -47.8125, 1.0)};
    EXPECT_NEAR(rad2deg(*estimate_aod(s)), -45.0, 1e-12);

    s = {detected_segment(30, -84.375, 5.0)};
    EXPECT_NEAR(rad2deg(*estimate_aod(s)), -84.375, 1e-12);

    s[0].detected = false;
    EXPECT_FALSE(estimate_aod(s).has_value());
}

TEST(EstimateAodProperty, UsesThreeStrongestDetected)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::bernoulli_distribution det(0.3);
    const BurstSchedule sched;
    for (int trial = 0; trial < 300; ++trial)
    {
        std::vector<BlockSegment> segs;
        for (int i = 0; i < 64; ++i)
        {
            auto s = detected_segment(i, rad2deg(sched.sweep_angle(i)), u(rng));
            s.detected = det(rng);
            segs.push_back(s);
        }
        std::vector<const BlockSegment *> d;
        for (const auto &s : segs)
            if (s.detected)
                d.push_back(&s);
        const auto est = estimate_aod(segs);
        if (d.empty())
        {
            EXPECT_FALSE(est.has_value());
            continue;
        }
        std::stable_sort(d.begin(), d.end(), [](auto *a, auto *b) { return a->eta > b->eta; });
        d.resize(std::min<std::size_t>(3, d.size()));
        double num = 0.0, den = 0.0;
        for (auto *s : d)
        {
            num += s->eta * s->sweep_angle;
            den += s->eta;
        }
        ASSERT_TRUE(est.has_value());
        EXPECT_NEAR(*est, num / den, 1e-12);
    }
}

TEST(EstimateToa, Examples)
{
    const double fs = 245.76e6;
    auto with_peak = [](Index at, double height) {
        BlockSegment s;
        s.values = Eigen::VectorXd::Constant(200, 0.1);
        s.values(at) = height;
        s.eta = height;
        s.detected = true;
        return s;
    };
    std::vector<BlockSegment> s{with_peak(37, 5.0), with_peak(37, 3.0), with_peak(37, 4.0)};
    auto toa = estimate_toa(s, fs);
    ASSERT_TRUE(toa.has_value());
    EXPECT_EQ(toa->delay_samples, 37);
    EXPECT_NEAR(toa->seconds, 150.55e-9, 0.005e-9);

    s = {with_peak(37, 5.0), with_peak(37, 5.0), with_peak(80, 6.0)};
    EXPECT_EQ(estimate_toa(s, fs)->delay_samples, 37);

    // Undetected segments do not contribute.
    s = {with_peak(37, 5.0), with_peak(80, 9.0)};
    s[1].detected = false;
    EXPECT_EQ(estimate_toa(s, fs)->delay_samples, 37);
    s[0].detected = false;
    EXPECT_FALSE(estimate_toa(s, fs).has_value());
}

TEST(TemplateBank, FindInsertEvict)
{
    TemplateBank bank(2);
    auto spec = std::make_shared<const Eigen::VectorXcd>(Eigen::VectorXcd::Ones(4));
    EXPECT_EQ(bank.find({0, 1}, 4), nullptr);
    bank.insert({0, 1}, 4, spec);
    EXPECT_EQ(bank.find({0, 1}, 4), spec);
    EXPECT_EQ(bank.find({0, 1}, 8), nullptr);
    bank.insert({1, 1}, 4, spec);
    bank.insert({2, 1}, 4, spec);
    EXPECT_EQ(bank.find({0, 1}, 4), nullptr); // oldest entry evicted
    EXPECT_NE(bank.find({2, 1}, 4), nullptr);
}

class SyncEndToEnd : public ::testing::Test
{
protected:
    static void SetUpTestSuite()
    {
        link_ = new LosLink(make_site(4, Vec2(0.0, 15.0)), 64, 99);
    }
    static void TearDownTestSuite()
    {
        delete link_;
        link_ = nullptr;
    }
    static LosLink *link_;
};

LosLink *SyncEndToEnd::link_ = nullptr;

TEST_F(SyncEndToEnd, NoiselessLosAt300m)
{
    const Vec2 train(std::sqrt(300.0 * 300.0 - 15.0 * 15.0), 0.0);
    const Buffer rx = link_->received(train);
    const auto m = measure_rrh(rx, link_->site(), link_->schedule(), link_->numerology());
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->delay_samples, std::llround(300.0 / (kSpeedOfLight / 245.76e6)));
    EXPECT_EQ(m->delay_samples, 246);
    const double aod = los_geometry(train, link_->site()).aod;
    EXPECT_LT(std::abs(rad2deg(m->aod_estimate - aod)), 2.8125);
}

TEST_F(SyncEndToEnd, BothSidesOfTheSite)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(-600.0, 600.0);
    for (int i = 0; i < 10; ++i)
    {
        const Vec2 train(ux(rng), 0.0);
        const auto m = measure_rrh(link_->received(train), link_->site(), link_->schedule(), link_->numerology());
        ASSERT_TRUE(m.has_value()) << "x = " << train.x();
        const auto g = los_geometry(train, link_->site());
        EXPECT_LE(std::abs(kSpeedOfLight * m->toa_estimate - g.distance), 0.61) << "x = " << train.x();
        EXPECT_LT(std::abs(rad2deg(m->aod_estimate - g.aod)), 2.8125) << "x = " << train.x();
    }
}

// Noise-free trials against templates with a different PSS. The rule allows
// an occasional 7-sigma excursion, so the requirement is a rate: at least 99%
// of trials give no measurement.
TEST_F(SyncEndToEnd, MismatchedPssGivesNoMeasurement)
{
    int trials = 0, false_measurements = 0;
    for (double x : {120.0, -300.0, 40.0})
    {
        const SyncReceiver receiver(link_->received(Vec2(x, 0.0)), link_->schedule(), link_->numerology());
        for (int sss = 0; sss < 336; sss += 20)
            for (int pss : {0, 2})
            {
                RrhSite other = link_->site();
                ASSERT_NE(other.cell.pss_id, pss);
                other.cell = {pss, sss};
                ++trials;
                if (receiver.measure(other))
                    ++false_measurements;
            }
    }
    EXPECT_EQ(trials, 102);
    EXPECT_LE(false_measurements, trials / 100);
}

// A template that shares the PSS still matches the PSS symbol of every block,
// so it locks onto the true delay at roughly half the matched peak. The
// deployment keeps such RRHs three sites apart.
TEST_F(SyncEndToEnd, SharedPssLocksOntoTrueDelay)
{
    const Vec2 train(120.0, 0.0);
    const Buffer rx = link_->received(train);
    RrhSite other = link_->site();
    other.cell.sss_id = (other.cell.sss_id + 100) % 336;
    const auto matched = measure_rrh(rx, link_->site(), link_->schedule(), link_->numerology());
    const auto shared = measure_rrh(rx, other, link_->schedule(), link_->numerology());
    ASSERT_TRUE(matched && shared);
    EXPECT_EQ(shared->delay_samples, matched->delay_samples);
}

TEST_F(SyncEndToEnd, PureNoiseGivesNoMeasurement)
{
    std::mt19937_64 rng(123);
    int false_measurements = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const Buffer rx = random_buffer(link_->window(), rng);
        if (measure_rrh(rx, link_->site(), link_->schedule(), link_->numerology()))
            ++false_measurements;
    }
    EXPECT_EQ(false_measurements, 0);
}

TEST_F(SyncEndToEnd, ReceiverReusesWindowAcrossRrhs)
{
    const Buffer rx = link_->received(Vec2(-80.0, 0.0));
    TemplateBank bank;
    const SyncReceiver receiver(rx, link_->schedule(), link_->numerology(), {}, &bank);
    const auto a = receiver.measure(link_->site(), 0.3);
    const auto b = measure_rrh(rx, link_->site(), link_->schedule(), link_->numerology(), 0.3);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->delay_samples, b->delay_samples);
    EXPECT_EQ(a->aod_estimate, b->aod_estimate);
    EXPECT_EQ(a->epoch_time, 0.3);
    EXPECT_NE(bank.find(link_->site().cell, 32768), nullptr);
}
