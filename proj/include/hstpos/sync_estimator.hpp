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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hstpos/common.hpp"
#include "hstpos/correlation.hpp"
#include "hstpos/geometry.hpp"
#include "hstpos/numerology.hpp"
#include "hstpos/ss_burst.hpp"

namespace hstpos {

// Detection threshold in standard deviations above the segment mean. A
// segment holds K ~ 6.6e3 lags, so a lower threshold fires on noise alone in
// most segments.
inline constexpr double kDetectionSigmas = 7.0;

// Correlation profile of one SS block: r~_i[k] = r[start + k], k < K.
struct BlockSegment
{
    int block_index = 0;
    Eigen::VectorXd values;
    Index start = 0;
    double sweep_angle = 0.0;
    double eta = 0.0;   // peak
    double mu = 0.0;    // mean
    double sigma = 0.0; // population standard deviation, peak included
    bool detected = false;
};

// Lags needed so that every block segment fits in the profile.
Index correlation_lags(const BurstLayout &burst);

// Splits the profile into per-block segments of length K = burst.min_spacing
// and applies the eta > mu + n sigma detection rule.
std::vector<BlockSegment> segment_blocks(const CorrelationProfile &profile, const BurstLayout &burst,
                                         double detection_sigmas = kDetectionSigmas);

// Peak-weighted average of the sweep angles of the (up to) three detected
// blocks with the largest peaks; ties go to the lower block index.
std::optional<double> estimate_aod(std::span<const BlockSegment> segments);

struct ToaEstimate
{
    Index delay_samples = 0;
    double seconds = 0.0;
};

// Argmax (lowest index on ties) of the sum of detected block segments.
std::optional<ToaEstimate> estimate_toa(std::span<const BlockSegment> segments, double sample_rate);

struct RrhMeasurement
{
    int rrh_id = 0;
    double epoch_time = 0.0;
    double aod_estimate = 0.0; // rad
    double toa_estimate = 0.0; // s
    Index delay_samples = 0;
    int num_detected_blocks = 0;
};

// Bounded, thread-safe store of conjugated block-template spectra keyed by
// cell identity and transform size.
class TemplateBank
{
public:
    explicit TemplateBank(std::size_t capacity = 16) : capacity_(capacity) {}

    std::shared_ptr<const Eigen::VectorXcd> find(CellIdentity cell, Index fft_size) const;
    void insert(CellIdentity cell, Index fft_size, std::shared_ptr<const Eigen::VectorXcd> spectrum);

private:
    using Key = std::tuple<int, int, Index>;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const Eigen::VectorXcd>> entries_;
    std::vector<Key> order_;
};

// Receiver-side processing of one received burst window (aligned to the
// burst transmit time). The received window is transformed once and reused for
// every RRH measured from it. Not thread-safe.
class SyncReceiver
{
public:
    SyncReceiver(const Buffer &received, const BurstSchedule &sched, const Numerology &num,
                 const SsBlockLayout &layout = {}, TemplateBank *bank = nullptr,
                 double detection_sigmas = kDetectionSigmas);

    // Segments for `cell`, for diagnostics and tests.
    std::vector<BlockSegment> segments(CellIdentity cell) const;

    std::optional<RrhMeasurement> measure(const RrhSite &rrh, double epoch_time = 0.0,
                                          std::vector<BlockSegment> *segments_out = nullptr) const;

    const BurstLayout &burst() const { return burst_; }

private:
    std::shared_ptr<const Eigen::VectorXcd> template_spectrum(CellIdentity cell) const;

    BurstSchedule sched_;
    Numerology num_;
    SsBlockLayout layout_;
    BurstLayout burst_;
    Correlator correlator_;
    TemplateBank *bank_;
    double detection_sigmas_;
};

std::optional<RrhMeasurement> measure_rrh(const Buffer &received, const RrhSite &rrh, const BurstSchedule &sched,
                                          const Numerology &num, double epoch_time = 0.0,
                                          const SsBlockLayout &layout = {},
                                          double detection_sigmas = kDetectionSigmas);

// Segment statistics as CSV: epoch,rrh_id,block,eta,mu,sigma,detected.
void write_segment_csv_header(std::ostream &os);
void append_segment_csv(std::ostream &os, int epoch, int rrh_id, std::span<const BlockSegment> segments);

} // namespace hstpos
