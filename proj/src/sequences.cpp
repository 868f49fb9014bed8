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

#include "hstpos/sequences.hpp"

#include <array>

namespace hstpos {

namespace {

using Bits = std::array<int, kSyncSequenceLength>;

// Runs x(i+7) = x(i+tap) + x(i) mod 2 from the given initial state x(0..6).
Bits lfsr(const std::array<int, 7> &init, int tap)
{
    Bits x{};
    for (int i = 0; i < 7; ++i)
        x[i] = init[i];
    for (int i = 0; i + 7 < kSyncSequenceLength; ++i)
        x[i + 7] = (x[i + tap] + x[i]) % 2;
    return x;
}

const Bits &pss_bits()
{
    static const Bits x = lfsr({0, 1, 1, 0, 1, 1, 1}, 4);
    return x;
}

const Bits &sss_bits0()
{
    static const Bits x = lfsr({1, 0, 0, 0, 0, 0, 0}, 4);
    return x;
}

const Bits &sss_bits1()
{
    static const Bits x = lfsr({1, 0, 0, 0, 0, 0, 0}, 1);
    return x;
}

} // namespace

Eigen::VectorXd gen_pss(int pss_id)
{
    if (pss_id < 0 || pss_id >= kNumPssIds)
        throw OutOfRangeError("gen_pss: pss_id " + std::to_string(pss_id) + " outside 0..2");
    const auto &x = pss_bits();
    Eigen::VectorXd d(kSyncSequenceLength);
    for (int n = 0; n < kSyncSequenceLength; ++n)
        d(n) = 1.0 - 2.0 * x[(n + 43 * pss_id) % kSyncSequenceLength];
    return d;
}

Eigen::VectorXd gen_sss(int sss_id, int pss_id)
{
    if (pss_id < 0 || pss_id >= kNumPssIds)
        throw OutOfRangeError("gen_sss: pss_id " + std::to_string(pss_id) + " outside 0..2");
    if (sss_id < 0 || sss_id >= kNumSssIds)
        throw OutOfRangeError("gen_sss: sss_id " + std::to_string(sss_id) + " outside 0..335");
    const int m0 = 15 * (sss_id / 112) + 5 * pss_id;
    const int m1 = sss_id % 112;
    const auto &x0 = sss_bits0();
    const auto &x1 = sss_bits1();
    Eigen::VectorXd d(kSyncSequenceLength);
    for (int n = 0; n < kSyncSequenceLength; ++n)
        d(n) = (1.0 - 2.0 * x0[(n + m0) % kSyncSequenceLength]) * (1.0 - 2.0 * x1[(n + m1) % kSyncSequenceLength]);
    return d;
}

} // namespace hstpos
