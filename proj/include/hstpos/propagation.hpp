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

#include "hstpos/common.hpp"
#include "hstpos/fading.hpp"

namespace hstpos {

// Passes `tx` through the time-varying tapped delay line:
// y[n] = sum_t g_t(n) x[n - d_t]. Output length equals input length.
Buffer fade(const Buffer &tx, const TdlRealization &taps);

// Fading followed by the large-scale amplitude sqrt(10^(P_R/10)), so that the
// received sample power is P_R in milliwatt units. Input must have unit
// average power (within 10%).
Buffer apply_link(const Buffer &tx, const TdlRealization &taps, double rx_power_dbm, double sample_rate);

struct DelayedStream
{
    Buffer samples;
    Index delay = 0; // propagation delay in samples
};

// Sum of streams shifted by their delays plus circularly symmetric complex
// Gaussian noise of total power noise_power_dbm (pass -infinity for none).
// `length` fixes the output length; 0 means the longest shifted stream.
Buffer superpose_rrhs(std::span<const DelayedStream> streams, double noise_power_dbm, std::uint64_t seed,
                      Index length = 0);

// Adds complex AWGN with per-sample variance `variance` in place.
void add_noise(Buffer &x, double variance, std::uint64_t seed);

} // namespace hstpos
