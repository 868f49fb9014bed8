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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hstpos/ekf.hpp"
#include "hstpos/fading.hpp"
#include "hstpos/geometry.hpp"
#include "hstpos/link_budget.hpp"
#include "hstpos/numerology.hpp"
#include "hstpos/shadowing.hpp"
#include "hstpos/ss_burst.hpp"
#include "hstpos/sync_estimator.hpp"

namespace hstpos {

struct ArrayConfig
{
    // 64 elements keep the transmit beam about one sweep step wide.
    int tx_elements = 64;
    int rx_elements = 8;
    double element_spacing = 0.5; // wavelengths

    void validate() const;
};

struct EstimatorConfig
{
    double detection_sigmas = kDetectionSigmas;

    void validate() const;
};

struct TrackerConfig
{
    MeasurementNoise noise;
    double sigma_a2 = 0.1; // jerk spectral density, m^2/s^5
    // Per-RRH innovation gate in Mahalanobis standard deviations; inf disables.
    double gate_sigmas = 5.0;

    void validate() const;
};

// Complete scenario description. Every default reproduces the reference
// deployment: 500 m spacing, 15 m offset, 30 GHz, 33 dBm, NF 5 dB, 240 kHz
// SCS, 64-beam sweep, 100 ms epochs over the long-haul speed profile.
struct SimConfig
{
    DeploymentConfig deployment;
    TrackProfile track = TrackProfile::long_haul();
    Numerology numerology;
    BurstSchedule burst;
    SsBlockLayout block_layout;
    LinkBudgetParams link;
    ShadowingParams shadowing;
    FadingParams fading;
    ArrayConfig arrays;
    EstimatorConfig estimator;
    TrackerConfig tracker;

    MeasurementMode mode = MeasurementMode::both;
    double epoch_interval = 0.1;       // s
    std::optional<int> num_epochs;     // unset: every epoch while the train is on the track
    std::uint64_t master_seed = 1;
    int num_serving = 3;
    int num_interferers = 5;           // nearest RRHs that transmit at all
    std::filesystem::path output_dir = "out";

    // Epochs actually simulated.
    int resolved_epochs() const;
    void validate() const;
};

// Parses TOML text. Unknown sections or keys are rejected; every failure is a
// ConfigError naming the dotted key path.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path &path);

MeasurementMode parse_mode(std::string_view name);
std::string_view mode_name(MeasurementMode mode);

} // namespace hstpos
