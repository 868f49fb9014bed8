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

#include "hstpos/numerology.hpp"

namespace hstpos {

int Numerology::cp_length(int symbol) const
{
    const int l = symbol % symbols_per_subframe();
    return (l == 0 || l == symbols_per_subframe() / 2) ? cp_extended : cp_normal;
}

Index Numerology::samples_per_subframe() const
{
    return static_cast<Index>(symbols_per_subframe()) * fft_size + 2 * cp_extended +
           static_cast<Index>(symbols_per_subframe() - 2) * cp_normal;
}

Index Numerology::symbol_start(int symbol) const
{
    const int per_sf = symbols_per_subframe();
    const Index full = symbol / per_sf;
    const int rem = symbol % per_sf;
    Index start = full * samples_per_subframe();
    start += static_cast<Index>(rem) * (fft_size + cp_normal);
    // Extended CP extras for symbols 0 and per_sf/2 already passed.
    if (rem > 0)
        start += cp_extended - cp_normal;
    if (rem > per_sf / 2)
        start += cp_extended - cp_normal;
    return start;
}

Index Numerology::samples_per_slot(int slot) const
{
    return symbol_start((slot + 1) * symbols_per_slot) - symbol_start(slot * symbols_per_slot);
}

double Numerology::nominal_scale() const
{
    return std::sqrt(static_cast<double>(fft_size) / static_cast<double>(active_subcarriers));
}

void Numerology::validate() const
{
    if (!(scs_hz > 0.0))
        throw ConfigError("numerology.scs_hz", "must be positive");
    if (fft_size < 2)
        throw ConfigError("numerology.fft_size", "must be at least 2");
    if (active_subcarriers < 1 || active_subcarriers > fft_size)
        throw ConfigError("numerology.active_subcarriers", "must lie in [1, fft_size]");
    if (cp_normal < 0 || cp_extended < cp_normal)
        throw ConfigError("numerology.cp_normal", "cyclic prefix lengths are inconsistent");
    if (symbols_per_slot < 1 || slots_per_subframe < 1 || symbols_per_subframe() % 2 != 0)
        throw ConfigError("numerology.symbols_per_slot", "frame structure is inconsistent");
    const double expected = sample_rate() * subframe_duration;
    if (std::abs(expected - static_cast<double>(samples_per_subframe())) > 1e-6)
        throw ConfigError("numerology", "samples per subframe (" + std::to_string(samples_per_subframe()) +
                                            ") differ from sample_rate * subframe_duration");
}

} // namespace hstpos
