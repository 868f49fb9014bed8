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

#include "hstpos/shadowing.hpp"

#include <algorithm>
#include <random>

#include "hstpos/rng.hpp"

namespace hstpos {

void ShadowingParams::validate() const
{
    if (!(sigma_db >= 0.0))
        throw ConfigError("shadowing.sigma_db", "must be non-negative");
    if (!(decorrelation_distance > 0.0))
        throw ConfigError("shadowing.decorrelation_distance", "must be positive");
    if (!(grid_step > 0.0))
        throw ConfigError("shadowing.grid_step", "must be positive");
}

ShadowingField::ShadowingField(std::span<const int> rrh_ids, double x_min, double x_max,
                               const ShadowingParams &params, std::uint64_t seed)
    : params_(params), x_min_(x_min), step_(params.grid_step)
{
    params_.validate();
    if (!(x_max >= x_min))
        throw std::invalid_argument("ShadowingField: x_max < x_min");

    const auto n = static_cast<Index>(std::ceil((x_max - x_min) / step_)) + 1;
    const double rho = std::exp(-step_ / params_.decorrelation_distance);
    const double innov = std::sqrt(1.0 - rho * rho);

    for (int id : rrh_ids)
    {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        if (params_.enabled && params_.sigma_db > 0.0)
        {
            Rng rng(hash_seed({seed, static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(Purpose::shadowing)}));
            std::normal_distribution<double> gauss(0.0, params_.sigma_db);
            s(0) = gauss(rng);
            for (Index i = 1; i < n; ++i)
                s(i) = rho * s(i - 1) + innov * gauss(rng);
        }
        fields_.emplace(id, std::move(s));
    }
}

const Eigen::VectorXd &ShadowingField::samples(int rrh_id) const
{
    auto it = fields_.find(rrh_id);
    if (it == fields_.end())
        throw std::out_of_range("ShadowingField: unknown RRH id " + std::to_string(rrh_id));
    return it->second;
}

double ShadowingField::at(int rrh_id, double x) const
{
    const auto &s = samples(rrh_id);
    const double pos = (x - x_min_) / step_;
    if (pos <= 0.0)
        return s(0);
    const auto last = s.size() - 1;
    if (pos >= static_cast<double>(last))
        return s(last);
    const auto i = static_cast<Index>(pos);
    const double frac = pos - static_cast<double>(i);
    return (1.0 - frac) * s(i) + frac * s(i + 1);
}

} // namespace hstpos
