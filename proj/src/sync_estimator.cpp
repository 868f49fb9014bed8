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

#include "hstpos/sync_estimator.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "hstpos/ofdm.hpp"

namespace hstpos {

Index correlation_lags(const BurstLayout &burst)
{
    return burst.blocks.back().start_sample + burst.min_spacing;
}

std::vector<BlockSegment> segment_blocks(const CorrelationProfile &profile, const BurstLayout &burst,
                                         double detection_sigmas)
{
    const Index k = burst.min_spacing;
    if (k <= 0)
        throw std::invalid_argument("segment_blocks: block spacing K must be positive");
    if (profile.size() < correlation_lags(burst))
        throw std::invalid_argument("segment_blocks: profile too short for the burst layout");

    std::vector<BlockSegment> out;
    out.reserve(burst.blocks.size());
    for (const auto &b : burst.blocks)
    {
        BlockSegment s;
        s.block_index = b.index;
        s.start = b.start_sample;
        s.sweep_angle = b.sweep_angle;
        s.values = profile.magnitude.segment(b.start_sample, k);
        s.eta = s.values.maxCoeff();
        s.mu = s.values.mean();
        s.sigma = std::sqrt((s.values.array() - s.mu).square().mean());
        s.detected = s.eta > s.mu + detection_sigmas * s.sigma;
        out.push_back(std::move(s));
    }
    return out;
}

std::optional<double> estimate_aod(std::span<const BlockSegment> segments)
{
    std::vector<const BlockSegment *> detected;
    for (const auto &s : segments)
        if (s.detected)
            detected.push_back(&s);
    if (detected.empty())
        return std::nullopt;

    std::sort(detected.begin(), detected.end(), [](const BlockSegment *a, const BlockSegment *b) {
        if (a->eta != b->eta)
            return a->eta > b->eta;
        return a->block_index < b->block_index;
    });
    const std::size_t n = std::min<std::size_t>(3, detected.size());
    double weight_sum = 0.0;
    double angle_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        weight_sum += detected[i]->eta;
        angle_sum += detected[i]->eta * detected[i]->sweep_angle;
    }
    if (!(weight_sum > 0.0))
        return std::nullopt;
    return angle_sum / weight_sum;
}

std::optional<ToaEstimate> estimate_toa(std::span<const BlockSegment> segments, double sample_rate)
{
    Eigen::VectorXd comb;
    for (const auto &s : segments)
    {
        if (!s.detected)
            continue;
        if (comb.size() == 0)
            comb = s.values;
        else
            comb += s.values;
    }
    if (comb.size() == 0)
        return std::nullopt;
    Index best = 0;
    comb.maxCoeff(&best); // first maximum
    return ToaEstimate{best, static_cast<double>(best) / sample_rate};
}

std::shared_ptr<const Eigen::VectorXcd> TemplateBank::find(CellIdentity cell, Index fft_size) const
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find({cell.pss_id, cell.sss_id, fft_size});
    return it == entries_.end() ? nullptr : it->second;
}

void TemplateBank::insert(CellIdentity cell, Index fft_size, std::shared_ptr<const Eigen::VectorXcd> spectrum)
{
    std::lock_guard lock(mutex_);
    const Key key{cell.pss_id, cell.sss_id, fft_size};
    if (entries_.contains(key))
        return;
    if (capacity_ > 0 && entries_.size() >= capacity_)
    {
        entries_.erase(order_.front());
        order_.erase(order_.begin());
    }
    entries_.emplace(key, std::move(spectrum));
    order_.push_back(key);
}

namespace {

Index block_samples_of(const BurstSchedule &sched, const Numerology &num, const SsBlockLayout &layout)
{
    return burst_layout(sched, num, layout).block_samples;
}

} // namespace

SyncReceiver::SyncReceiver(const Buffer &received, const BurstSchedule &sched, const Numerology &num,
                           const SsBlockLayout &layout, TemplateBank *bank, double detection_sigmas)
    : sched_(sched), num_(num), layout_(layout), burst_(burst_layout(sched, num, layout)),
      correlator_(received, correlation_lags(burst_), block_samples_of(sched, num, layout), num.sample_rate()),
      bank_(bank), detection_sigmas_(detection_sigmas)
{
}

std::shared_ptr<const Eigen::VectorXcd> SyncReceiver::template_spectrum(CellIdentity cell) const
{
    if (bank_)
        if (auto hit = bank_->find(cell, correlator_.fft_size()))
            return hit;
    const Buffer tmpl = block_template(reference_waveform(cell, sched_, num_, layout_), burst_);
    auto spec = std::make_shared<const Eigen::VectorXcd>(correlator_.reference_spectrum(tmpl));
    if (bank_)
        bank_->insert(cell, correlator_.fft_size(), spec);
    return spec;
}

std::vector<BlockSegment> SyncReceiver::segments(CellIdentity cell) const
{
    const auto profile = correlator_.correlate_spectrum(*template_spectrum(cell));
    return segment_blocks(profile, burst_, detection_sigmas_);
}

std::optional<RrhMeasurement> SyncReceiver::measure(const RrhSite &rrh, double epoch_time,
                                                    std::vector<BlockSegment> *segments_out) const
{
    auto segs = segments(rrh.cell);
    const auto aod = estimate_aod(segs);
    const auto toa = estimate_toa(segs, num_.sample_rate());
    std::optional<RrhMeasurement> out;
    if (aod && toa)
    {
        RrhMeasurement m;
        m.rrh_id = rrh.id;
        m.epoch_time = epoch_time;
        m.aod_estimate = *aod;
        m.toa_estimate = toa->seconds;
        m.delay_samples = toa->delay_samples;
        m.num_detected_blocks =
            static_cast<int>(std::count_if(segs.begin(), segs.end(), [](const BlockSegment &s) { return s.detected; }));
        out = m;
    }
    if (segments_out)
        *segments_out = std::move(segs);
    return out;
}

std::optional<RrhMeasurement> measure_rrh(const Buffer &received, const RrhSite &rrh, const BurstSchedule &sched,
                                          const Numerology &num, double epoch_time, const SsBlockLayout &layout,
                                          double detection_sigmas)
{
    return SyncReceiver(received, sched, num, layout, nullptr, detection_sigmas).measure(rrh, epoch_time);
}

void write_segment_csv_header(std::ostream &os)
{
    os << "epoch,rrh_id,block,eta,mu,sigma,detected\n";
}

void append_segment_csv(std::ostream &os, int epoch, int rrh_id, std::span<const BlockSegment> segments)
{
    char line[160];
    for (const auto &s : segments)
    {
        std::snprintf(line, sizeof line, "%d,%d,%d,%.9g,%.9g,%.9g,%d\n", epoch, rrh_id, s.block_index, s.eta, s.mu,
                      s.sigma, s.detected ? 1 : 0);
        os << line;
    }
}

} // namespace hstpos
