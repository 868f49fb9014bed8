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

#include "hstpos/fading.hpp"

#include <random>

#include "hstpos/rng.hpp"

namespace hstpos {

const std::array<TdlTapSpec, 14> &tdl_d_profile()
{
    static const std::array<TdlTapSpec, 14> table{{
        {0.0, -0.2, true},
        {0.0, -13.5, false},
        {0.035, -18.8, false},
        {0.612, -21.0, false},
        {1.363, -22.8, false},
        {1.405, -17.9, false},
        {1.804, -20.1, false},
        {2.596, -21.9, false},
        {1.775, -22.9, false},
        {4.042, -27.8, false},
        {7.937, -23.6, false},
        {9.424, -24.8, false},
        {9.708, -30.0, false},
        {12.525, -27.7, false},
    }};
    return table;
}

void FadingParams::validate() const
{
    if (!(delay_spread >= 0.0))
        throw ConfigError("fading.delay_spread", "must be non-negative");
    if (num_sinusoids < 1)
        throw ConfigError("fading.num_sinusoids", "must be at least 1");
    if (update_stride < 1)
        throw ConfigError("fading.update_stride", "must be at least 1");
}

cdouble TdlRealization::gain(Index tap, Index n) const
{
    const Index i = n / stride;
    if (i + 1 >= gains.cols())
        return gains(tap, gains.cols() - 1);
    const double frac = static_cast<double>(n - i * stride) / static_cast<double>(stride);
    return (1.0 - frac) * gains(tap, i) + frac * gains(tap, i + 1);
}

Eigen::VectorXcd TdlRealization::gains_at(Index n) const
{
    Eigen::VectorXcd g(num_taps());
    for (Index t = 0; t < num_taps(); ++t)
        g(t) = gain(t, n);
    return g;
}

TdlRealization TdlRealization::fixed(const std::vector<int> &delay_samples, const std::vector<cdouble> &tap_gains,
                                     Index num_samples, double sample_rate)
{
    if (delay_samples.size() != tap_gains.size())
        throw std::invalid_argument("TdlRealization::fixed: delay/gain count mismatch");
    const auto n = static_cast<Index>(delay_samples.size());
    TdlRealization r;
    r.tap_delay_samples.resize(n);
    r.tap_delays.resize(n);
    r.gains.resize(n, 1);
    for (Index t = 0; t < n; ++t)
    {
        r.tap_delay_samples(t) = delay_samples[t];
        r.tap_delays(t) = delay_samples[t] / sample_rate;
        r.gains(t, 0) = tap_gains[t];
    }
    r.stride = std::max<Index>(num_samples, 1);
    r.num_samples = num_samples;
    r.sample_rate = sample_rate;
    r.k_factor_db = std::numeric_limits<double>::infinity();
    return r;
}

TdlRealization tdl_d_taps(double duration, double sample_rate, double max_doppler, std::uint64_t seed,
                          const FadingParams &params, std::optional<double> los_doppler)
{
    if (!(duration > 0.0))
        throw std::invalid_argument("tdl_d_taps: duration must be positive");
    params.validate();

    const auto &profile = tdl_d_profile();
    double total = 0.0;
    for (const auto &t : profile)
        total += db2lin(t.power_db);

    constexpr Index kNumTaps = 13;
    TdlRealization r;
    r.sample_rate = sample_rate;
    r.max_doppler = max_doppler;
    r.stride = params.update_stride;
    r.num_samples = std::max<Index>(1, static_cast<Index>(std::llround(duration * sample_rate)));
    const Index grid = (r.num_samples - 1) / r.stride + 2;
    r.gains = Eigen::MatrixXcd::Zero(kNumTaps, grid);
    r.tap_delays.resize(kNumTaps);
    r.tap_delay_samples.resize(kNumTaps);

    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(-kPi, kPi);
    const double step_dt = static_cast<double>(r.stride) / sample_rate;
    const int n_sin = params.num_sinusoids;

    // Profile row 0 (LOS) and row 1 (Rayleigh) share tap 0.
    for (std::size_t row = 0; row < profile.size(); ++row)
    {
        const auto &spec = profile[row];
        const Index tap = row == 0 ? 0 : static_cast<Index>(row) - 1;
        const double amp = std::sqrt(db2lin(spec.power_db) / total);
        const double delay = spec.normalized_delay * params.delay_spread;
        r.tap_delays(tap) = delay;
        r.tap_delay_samples(tap) = static_cast<int>(std::lround(delay * sample_rate));

        if (spec.los)
        {
            const double f = los_doppler.value_or(max_doppler);
            const cdouble rot = std::polar(1.0, 2.0 * kPi * f * step_dt);
            cdouble ph = std::polar(amp, uniform(rng));
            for (Index g = 0; g < grid; ++g)
            {
                r.gains(tap, g) += ph;
                ph *= rot;
            }
            continue;
        }

        // Sum of sinusoids with arrival angles spread uniformly around the
        // circle under a common random offset.
        const double offset = uniform(rng);
        Eigen::VectorXcd ph(n_sin), rot(n_sin);
        for (int n = 0; n < n_sin; ++n)
        {
            const double alpha = (2.0 * kPi * (n + 1) - kPi + offset) / n_sin;
            const double fd = max_doppler * std::cos(alpha);
            ph(n) = std::polar(amp / std::sqrt(static_cast<double>(n_sin)), uniform(rng));
            rot(n) = std::polar(1.0, 2.0 * kPi * fd * step_dt);
        }
        for (Index g = 0; g < grid; ++g)
        {
            r.gains(tap, g) += ph.sum();
            ph = ph.cwiseProduct(rot);
        }
    }
    return r;
}

} // namespace hstpos
