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

// Correlation magnitudes r[m], m = 0 .. size()-1.
struct CorrelationProfile
{
    Eigen::VectorXd magnitude;
    double sample_rate = 1.0;

    Index size() const { return magnitude.size(); }
};

// r[m] = |sum_n z[n + m] conj(b[n])| for m in [0, num_lags): lag m aligns the
// reference with received samples starting at m, so a copy of the reference
// delayed by d samples peaks at m = d. Requires
// received.size() >= reference.size() + num_lags - 1.
CorrelationProfile cross_correlate(const Buffer &received, const Buffer &reference, Index num_lags,
                                   double sample_rate);

// Overlap-save FFT correlator. The received window is transformed once and can
// then be run against several references of the same length.
class Correlator
{
public:
    Correlator(const Buffer &received, Index num_lags, Index reference_length, double sample_rate);

    Index fft_size() const { return fft_size_; }
    Index num_lags() const { return num_lags_; }
    Index reference_length() const { return reference_length_; }

    // Conjugated, zero-padded spectrum of a reference; reusable across windows
    // with the same fft_size().
    Eigen::VectorXcd reference_spectrum(const Buffer &reference) const;

    CorrelationProfile correlate(const Buffer &reference) const;
    CorrelationProfile correlate_spectrum(const Eigen::VectorXcd &conj_reference_spectrum) const;

private:
    Index num_lags_;
    Index reference_length_;
    Index fft_size_;
    double sample_rate_;
    Index step_;
    Eigen::MatrixXcd received_spectra_; // one column per block
};

Index next_pow2(Index n);

// Overlap-save block length used by Correlator.
Index correlation_block_size(Index reference_length, Index num_lags);

} // namespace hstpos
