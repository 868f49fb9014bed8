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

#include "hstpos/propagation.hpp"

#include <algorithm>
#include <random>

#include "hstpos/rng.hpp"

namespace hstpos {

Buffer fade(const Buffer &tx, const TdlRealization &taps)
{
    const Index n = tx.size();
    Buffer y = Buffer::Zero(n);
    const Index stride = taps.stride;
    const Index grid = taps.gains.cols();

    for (Index t = 0; t < taps.num_taps(); ++t)
    {
        const Index d = taps.tap_delay_samples(t);
        if (d >= n)
            continue;
        // Walk grid intervals so the interpolation weights are incremental.
        for (Index g = 0; g * stride < n; ++g)
        {
            const Index begin = std::max(g * stride, d);
            const Index end = std::min((g + 1) * stride, n);
            if (begin >= end)
                continue;
            const cdouble g0 = taps.gains(t, std::min(g, grid - 1));
            const cdouble g1 = taps.gains(t, std::min(g + 1, grid - 1));
            const cdouble slope = (g1 - g0) / static_cast<double>(stride);
            for (Index i = begin; i < end; ++i)
                y(i) += (g0 + slope * static_cast<double>(i - g * stride)) * tx(i - d);
        }
    }
    return y;
}

Buffer apply_link(const Buffer &tx, const TdlRealization &taps, double rx_power_dbm, double sample_rate)
{
    const double p = mean_power(tx);
    if (std::abs(p - 1.0) > 0.1)
        throw ContractViolation("apply_link: transmit samples must have unit average power (got " +
                                std::to_string(p) + ")");
    if (std::abs(taps.sample_rate - sample_rate) > 1e-6 * sample_rate)
        throw ContractViolation("apply_link: tap realization sample rate does not match");
    Buffer y = fade(tx, taps);
    y *= std::sqrt(db2lin(rx_power_dbm));
    return y;
}

void add_noise(Buffer &x, double variance, std::uint64_t seed)
{
    if (!(variance > 0.0))
        return;
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    for (Index i = 0; i < x.size(); ++i)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x(i) += cdouble(re, im);
    }
}

Buffer superpose_rrhs(std::span<const DelayedStream> streams, double noise_power_dbm, std::uint64_t seed,
                      Index length)
{
    Index n = length;
    if (n == 0)
    {
        for (const auto &s : streams)
            n = std::max(n, s.delay + s.samples.size());
    }
    Buffer out = Buffer::Zero(n);
    for (const auto &s : streams)
    {
        if (s.delay < 0)
            throw std::invalid_argument("superpose_rrhs: delays must be non-negative");
        if (s.delay >= n)
            continue;
        const Index m = std::min(s.samples.size(), n - s.delay);
        out.segment(s.delay, m) += s.samples.head(m);
    }
    if (std::isfinite(noise_power_dbm))
        add_noise(out, db2lin(noise_power_dbm), seed);
    return out;
}

} // namespace hstpos
