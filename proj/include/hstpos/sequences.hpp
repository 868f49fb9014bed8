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

inline constexpr int kSyncSequenceLength = 127;
inline constexpr int kNumPssIds = 3;
inline constexpr int kNumSssIds = 336;

// Primary synchronization sequence: BPSK (1 - 2b) of a degree-7 m-sequence
// x(i+7) = x(i+4) + x(i) cyclically shifted by 43 * pss_id.
Eigen::VectorXd gen_pss(int pss_id);

// Secondary synchronization sequence: product of two BPSK m-sequences
// x0(i+7) = x0(i+4) + x0(i) and x1(i+7) = x1(i+1) + x1(i) with shifts
// m0 = 15 floor(sss_id / 112) + 5 pss_id and m1 = sss_id mod 112.
Eigen::VectorXd gen_sss(int sss_id, int pss_id);

} // namespace hstpos
