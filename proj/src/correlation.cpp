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

#include "hstpos/correlation.hpp"

#include <unsupported/Eigen/FFT>

namespace hstpos {

namespace {

// kissfft keeps twiddles per transform size inside the FFT object, so one
// object per thread avoids recomputing them for every window.
Eigen::FFT<double> &thread_fft()
{
    thread_local Eigen::FFT<double> fft;
    return fft;
}

} // namespace

Index next_pow2(Index n)
{
    Index p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

Index correlation_block_size(Index reference_length, Index num_lags)
{
    // Four reference lengths per block keeps the overlap small while the
    // transforms stay cache resident.
    const Index full = next_pow2(reference_length + num_lags - 1);
    return std::min(full, std::max<Index>(next_pow2(4 * reference_length), 1024));
}

Correlator::Correlator(const Buffer &received, Index num_lags, Index reference_length, double sample_rate)
    : num_lags_(num_lags), reference_length_(reference_length), sample_rate_(sample_rate)
{
    if (num_lags < 1 || reference_length < 1)
        throw std::invalid_argument("Correlator: lag count and reference length must be positive");
    const Index needed = reference_length + num_lags - 1;
    if (received.size() < needed)
        throw ContractViolation("cross_correlate: received window of " + std::to_string(received.size()) +
                                " samples is shorter than reference length + lags - 1 = " +
                                std::to_string(needed));
    // Overlap-save: block b holds received samples [b*step, b*step + fft_size)
    // and yields the wrap-free lags [b*step, (b+1)*step).
    fft_size_ = correlation_block_size(reference_length, num_lags);
    step_ = fft_size_ - reference_length + 1;
    const Index blocks = (num_lags + step_ - 1) / step_;
    received_spectra_.resize(fft_size_, blocks);
    Eigen::VectorXcd padded(fft_size_);
    Eigen::VectorXcd spec;
    auto &fft = thread_fft();
    for (Index b = 0; b < blocks; ++b)
    {
        const Index start = b * step_;
        const Index count = std::min(fft_size_, needed - start);
        padded.setZero();
        padded.head(count) = received.segment(start, count);
        fft.fwd(spec, padded);
        received_spectra_.col(b) = spec;
    }
}

Eigen::VectorXcd Correlator::reference_spectrum(const Buffer &reference) const
{
    if (reference.size() != reference_length_)
        throw std::invalid_argument("Correlator: reference length mismatch");
    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(fft_size_);
    padded.head(reference_length_) = reference;
    Eigen::VectorXcd spec;
    thread_fft().fwd(spec, padded);
    return spec.conjugate();
}

CorrelationProfile Correlator::correlate_spectrum(const Eigen::VectorXcd &conj_reference_spectrum) const
{
    if (conj_reference_spectrum.size() != fft_size_)
        throw std::invalid_argument("Correlator: reference spectrum size mismatch");
    CorrelationProfile out;
    out.sample_rate = sample_rate_;
    out.magnitude.resize(num_lags_);
    Eigen::VectorXcd product(fft_size_);
    Eigen::VectorXcd corr;
    auto &fft = thread_fft();
    for (Index b = 0; b < received_spectra_.cols(); ++b)
    {
        product = received_spectra_.col(b).cwiseProduct(conj_reference_spectrum);
        fft.inv(corr, product);
        const Index start = b * step_;
        const Index count = std::min(step_, num_lags_ - start);
        out.magnitude.segment(start, count) = corr.head(count).cwiseAbs();
    }
    return out;
}

CorrelationProfile Correlator::correlate(const Buffer &reference) const
{
    return correlate_spectrum(reference_spectrum(reference));
}

CorrelationProfile cross_correlate(const Buffer &received, const Buffer &reference, Index num_lags,
                                   double sample_rate)
{
    Correlator c(received, num_lags, reference.size(), sample_rate);
    return c.correlate(reference);
}

} // namespace hstpos
