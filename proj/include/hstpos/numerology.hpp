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

#include "hstpos/common.hpp"

namespace hstpos {

// CP-OFDM frame constants. Within each subframe the first and the middle
// symbol carry the extended cyclic prefix; all others the normal one.
struct Numerology
{
    double scs_hz = 240e3;
    int fft_size = 1024;
    int active_subcarriers = 600;
    int cp_normal = 72;
    int cp_extended = 200;
    int symbols_per_slot = 14;
    int slots_per_subframe = 16;
    double subframe_duration = 1e-3;

    double sample_rate() const { return scs_hz * fft_size; }
    int symbols_per_subframe() const { return symbols_per_slot * slots_per_subframe; }

    // CP length of global symbol index `symbol` (counted from a subframe start).
    int cp_length(int symbol) const;
    int symbol_length(int symbol) const { return fft_size + cp_length(symbol); }

    // First sample (start of the CP) of global symbol `symbol`.
    Index symbol_start(int symbol) const;
    Index samples_for_symbols(int num_symbols) const { return symbol_start(num_symbols); }
    Index samples_per_subframe() const;
    Index samples_per_slot(int slot) const;

    // Amplitude scale that gives a fully loaded unit-power symbol unit average
    // sample power after a unitary inverse transform.
    double nominal_scale() const;

    void validate() const;
};

} // namespace hstpos
