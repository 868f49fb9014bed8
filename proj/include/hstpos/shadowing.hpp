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
#include <unordered_map>

#include "hstpos/common.hpp"

namespace hstpos {

struct ShadowingParams
{
    bool enabled = true;
    double sigma_db = 4.0;
    double decorrelation_distance = 10.0; // m
    double grid_step = 1.0;               // m, sampling step along x

    void validate() const;
};

// Independent zero-mean Gaussian processes S_k(x), one per RRH, with
// exponential autocorrelation exp(-|dx| / decorrelation_distance). Each process
// is sampled on a regular grid over [x_min, x_max] as a first-order
// autoregression and linearly interpolated in between; outside the grid the
// edge value is held.
class ShadowingField
{
public:
    ShadowingField() = default;
    ShadowingField(std::span<const int> rrh_ids, double x_min, double x_max, const ShadowingParams &params,
                   std::uint64_t seed);

    // Shadowing (dB) seen from RRH `rrh_id` at track coordinate x.
    double at(int rrh_id, double x) const;

    const Eigen::VectorXd &samples(int rrh_id) const;
    double x_min() const { return x_min_; }
    double grid_step() const { return step_; }
    const ShadowingParams &params() const { return params_; }

private:
    ShadowingParams params_;
    double x_min_ = 0.0;
    double step_ = 1.0;
    std::unordered_map<int, Eigen::VectorXd> fields_;
};

} // namespace hstpos
