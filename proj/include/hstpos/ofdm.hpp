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

#include <filesystem>

#include "hstpos/common.hpp"
#include "hstpos/numerology.hpp"
#include "hstpos/resource_grid.hpp"
#include "hstpos/ss_burst.hpp"

namespace hstpos {

// Spectrum bin of active subcarrier k: the active band is centered on DC and
// DC itself is used.
inline int subcarrier_bin(int k, const Numerology &num)
{
    return (k - num.active_subcarriers / 2 + num.fft_size) % num.fft_size;
}

// CP-OFDM modulation with a fixed amplitude scale applied after a unitary
// inverse transform. Symbol l of the grid becomes global symbol l of the frame.
Buffer ofdm_modulate(const ResourceGrid &grid, const Numerology &num, double amplitude_scale);

// As above, rescaled to unit average power over the samples of symbols that
// carry at least one non-zero element.
Buffer ofdm_modulate(const ResourceGrid &grid, const Numerology &num);

// Inverse of ofdm_modulate for a known amplitude scale: strips each CP and
// maps the forward transform back onto the active subcarriers.
Eigen::MatrixXcd ofdm_demodulate(const Buffer &samples, const Numerology &num, int num_symbols,
                                 double amplitude_scale);

// Burst-set waveform carrying only the PSS and SSS of `cell` (PBCH and data
// zeroed), with the same length and timing as the transmitted burst.
Buffer reference_waveform(CellIdentity cell, const BurstSchedule &sched, const Numerology &num,
                          const SsBlockLayout &layout = {});

// Time-domain span of one block within a burst-aligned waveform. All blocks
// of a burst share this template.
Buffer block_template(const Buffer &burst_waveform, const BurstLayout &burst);

// Interleaved little-endian float32 I/Q, no header.
void write_iq_dump(const std::filesystem::path &path, const Buffer &samples);

} // namespace hstpos
