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

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hstpos/config.hpp"
#include "hstpos/shadowing.hpp"
#include "hstpos/sync_estimator.hpp"

namespace hstpos {

// One serving-RRH measurement together with the truth it is scored against.
struct MeasurementRecord
{
    int epoch = 0;
    double time = 0.0;
    int rrh_id = 0;
    Vec2 rrh_position = Vec2::Zero();
    double aod_estimate = 0.0; // rad
    double aod_true = 0.0;     // rad
    double toa_estimate = 0.0; // s
    double toa_true = 0.0;     // s
    Index delay_samples = 0;
    int detected_blocks = 0;

    double angle_error_deg() const { return std::abs(rad2deg(wrap_angle(aod_estimate - aod_true))); }
    double distance_error_m() const { return std::abs(kSpeedOfLight * (toa_estimate - toa_true)); }
};

// Everything the receiver produced at one epoch, independent of the tracking
// mode.
struct EpochObservation
{
    int epoch = 0;
    double time = 0.0;
    TrainKinematics truth;
    std::vector<int> serving_ids;
    std::vector<MeasurementRecord> measurements; // serving order, detected RRHs only
};

struct EpochRecord
{
    int epoch = 0;
    double time = 0.0;
    TrainKinematics truth;
    bool tracked = false; // false until the filter has been initialized
    StateVec<double> estimate = StateVec<double>::Constant(std::numeric_limits<double>::quiet_NaN());
    double position_error = std::numeric_limits<double>::quiet_NaN();
    int num_serving = 0;
    int num_measurements = 0;
};

struct Percentiles
{
    double p50 = 0.0, p75 = 0.0, p90 = 0.0, p95 = 0.0, p99 = 0.0;
};

struct ErrorStats
{
    std::size_t count = 0;
    double mean = 0.0;
    Percentiles pct;
};

struct MetricsSummary
{
    std::size_t num_epochs = 0;
    std::size_t num_tracked = 0;
    ErrorStats position;             // m
    double sub_meter_availability = 0.0;
    ErrorStats angle;                // deg
    ErrorStats distance;             // m
};

// Nearest-rank percentile of an ascending-sorted sample, p in (0, 100].
double nearest_rank(std::span<const double> sorted, double p);
ErrorStats error_stats(std::vector<double> values);

// Static parts of a run (RRH sites, shadowing field, template cache) shared
// by all epochs. observe() is safe to call concurrently.
class Scenario
{
public:
    explicit Scenario(const SimConfig &cfg);

    const SimConfig &config() const { return cfg_; }
    const std::vector<RrhSite> &sites() const { return sites_; }
    const ShadowingField &shadowing() const { return shadowing_; }

    // Length of the received window processed per burst.
    Index window_samples() const { return window_; }

    // Synthesizes the received burst window at `epoch` and measures every
    // serving RRH.
    EpochObservation observe(int epoch) const;

    // Received windows of the nose (0) and tail (1) panels, for debugging and
    // tests. `serving` receives the serving RRHs in rank order.
    std::array<Buffer, 2> received_windows(int epoch, std::vector<RrhSite> *serving = nullptr) const;

private:
    Buffer transmit_stream(const RrhSite &site, const Vec2 &train, int epoch) const;

    SimConfig cfg_;
    std::vector<RrhSite> sites_;
    ShadowingField shadowing_;
    BurstLayout burst_;
    int frame_symbols_ = 0;
    Index window_ = 0;
    mutable TemplateBank bank_;
};

// Observations for epochs [0, cfg.resolved_epochs()). Results do not depend
// on `workers` (0 = hardware concurrency).
std::vector<EpochObservation> synthesize_observations(const Scenario &scenario, unsigned workers = 0);

// Sequential EKF pass over the observations.
std::vector<EpochRecord> track(const SimConfig &cfg, std::span<const EpochObservation> observations,
                               MeasurementMode mode);

MetricsSummary compute_metrics(std::span<const EpochRecord> epochs, std::span<const MeasurementRecord> measurements);

struct SimulationResult
{
    std::vector<EpochRecord> epochs;
    std::vector<MeasurementRecord> measurements;
    MetricsSummary summary;
};

SimulationResult run_simulation(const SimConfig &cfg, unsigned workers = 0);

// Flattens the measurements of all observations in epoch order.
std::vector<MeasurementRecord> collect_measurements(std::span<const EpochObservation> observations);

// Writes epochs.csv, measurements.csv and summary.csv into `dir`.
void export_records(const std::filesystem::path &dir, std::span<const EpochRecord> epochs,
                    std::span<const MeasurementRecord> measurements, const MetricsSummary &summary);

// Reads back the files written by export_records. measurements.csv is
// optional.
std::vector<EpochRecord> read_epochs_csv(const std::filesystem::path &path);
std::vector<MeasurementRecord> read_measurements_csv(const std::filesystem::path &path);
void write_summary_csv(const std::filesystem::path &path, const MetricsSummary &summary);

} // namespace hstpos
