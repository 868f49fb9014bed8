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

#include "hstpos/ofdm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace hstpos {

Buffer ofdm_modulate(const ResourceGrid &grid, const Numerology &num, double amplitude_scale)
{
    if (grid.subcarriers() != num.active_subcarriers)
        throw std::invalid_argument("ofdm_modulate: grid has " + std::to_string(grid.subcarriers()) +
                                    " subcarriers, numerology expects " + std::to_string(num.active_subcarriers));
    const int n_fft = num.fft_size;
    Buffer out = Buffer::Zero(num.samples_for_symbols(grid.symbols()));

    Eigen::FFT<double> fft;
    Eigen::VectorXcd spectrum(n_fft), body(n_fft);
    const double gain = std::sqrt(static_cast<double>(n_fft)) * amplitude_scale;
    const auto &values = grid.values();

    for (int l = 0; l < grid.symbols(); ++l)
    {
        if (values.col(l).isZero(0.0))
            continue;
        spectrum.setZero();
        for (int k = 0; k < num.active_subcarriers; ++k)
            spectrum(subcarrier_bin(k, num)) = values(k, l);
        fft.inv(body, spectrum);
        body *= gain;

        const int cp = num.cp_length(l);
        const Index start = num.symbol_start(l);
        out.segment(start, cp) = body.tail(cp);
        out.segment(start + cp, n_fft) = body;
    }
    return out;
}

Buffer ofdm_modulate(const ResourceGrid &grid, const Numerology &num)
{
    Buffer x = ofdm_modulate(grid, num, num.nominal_scale());
    double energy = 0.0;
    Index count = 0;
    const auto &values = grid.values();
    for (int l = 0; l < grid.symbols(); ++l)
    {
        if (values.col(l).isZero(0.0))
            continue;
        const Index start = num.symbol_start(l);
        const Index len = num.symbol_length(l);
        energy += x.segment(start, len).squaredNorm();
        count += len;
    }
    if (count > 0 && energy > 0.0)
        x *= std::sqrt(static_cast<double>(count) / energy);
    return x;
}

Eigen::MatrixXcd ofdm_demodulate(const Buffer &samples, const Numerology &num, int num_symbols,
                                 double amplitude_scale)
{
    if (samples.size() < num.samples_for_symbols(num_symbols))
        throw std::invalid_argument("ofdm_demodulate: buffer shorter than the requested symbols");
    const int n_fft = num.fft_size;
    Eigen::MatrixXcd grid(num.active_subcarriers, num_symbols);
    Eigen::FFT<double> fft;
    Eigen::VectorXcd body(n_fft), spectrum(n_fft);
    const double gain = 1.0 / (std::sqrt(static_cast<double>(n_fft)) * amplitude_scale);
    for (int l = 0; l < num_symbols; ++l)
    {
        body = samples.segment(num.symbol_start(l) + num.cp_length(l), n_fft);
        fft.fwd(spectrum, body);
        for (int k = 0; k < num.active_subcarriers; ++k)
            grid(k, l) = spectrum(subcarrier_bin(k, num)) * gain;
    }
    return grid;
}

Buffer reference_waveform(CellIdentity cell, const BurstSchedule &sched, const Numerology &num,
                          const SsBlockLayout &layout)
{
    ResourceGrid grid(num.active_subcarriers, sched.num_symbols(num));
    schedule_burst_set(sched, num, grid, cell, 0, DataFill::none, layout, BlockContent::sync_only);
    return ofdm_modulate(grid, num, num.nominal_scale());
}

Buffer block_template(const Buffer &burst_waveform, const BurstLayout &burst)
{
    const Index start = burst.blocks.front().start_sample;
    if (burst_waveform.size() < start + burst.block_samples)
        throw std::invalid_argument("block_template: waveform shorter than the first block");
    return burst_waveform.segment(start, burst.block_samples);
}

void write_iq_dump(const std::filesystem::path &path, const Buffer &samples)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_iq_dump: cannot open " + path.string());
    std::vector<char> bytes(static_cast<std::size_t>(samples.size()) * 8);
    for (Index i = 0; i < samples.size(); ++i)
    {
        const float iq[2] = {static_cast<float>(samples(i).real()), static_cast<float>(samples(i).imag())};
        for (int c = 0; c < 2; ++c)
        {
            std::uint32_t word;
            std::memcpy(&word, &iq[c], 4);
            if constexpr (std::endian::native == std::endian::big)
                word = __builtin_bswap32(word);
            std::memcpy(&bytes[static_cast<std::size_t>(i) * 8 + c * 4], &word, 4);
        }
    }
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw std::runtime_error("write_iq_dump: write failed for " + path.string());
}

} // namespace hstpos
