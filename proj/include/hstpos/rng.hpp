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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hstpos {

using Rng = std::mt19937_64;

// Labels for independent random substreams.
enum class Purpose : std::uint64_t
{
    shadowing = 1,
    fading = 2,
    data = 3,
    pbch = 4,
    noise = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive hash of a list of words; used to derive substream seeds as
// hash(master_seed, epoch, rrh_id, purpose).
inline std::uint64_t hash_seed(std::initializer_list<std::uint64_t> words)
{
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (auto w : words)
        h = splitmix64(h ^ splitmix64(w));
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t epoch, std::uint64_t rrh_id, Purpose purpose)
{
    return hash_seed({master, epoch, rrh_id, static_cast<std::uint64_t>(purpose)});
}

} // namespace hstpos
