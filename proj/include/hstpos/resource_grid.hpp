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

// Subcarrier x OFDM-symbol grid of complex resource elements with an
// occupancy mask. A resource element can be written once unless the write
// explicitly asks to overwrite.
class ResourceGrid
{
public:
    using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

    ResourceGrid() = default;
    ResourceGrid(int subcarriers, int symbols);

    int subcarriers() const { return static_cast<int>(values_.rows()); }
    int symbols() const { return static_cast<int>(values_.cols()); }

    cdouble operator()(int k, int l) const { return values_(k, l); }
    bool occupied(int k, int l) const { return mask_(k, l); }

    void set(int k, int l, cdouble v, bool overwrite = false);

    // Marks a rectangle occupied without changing values.
    void reserve(int k0, int l0, int nk, int nl);

    // Copies `fragment` (values and occupancy) with its origin at (k0, l0).
    // Throws OccupancyConflict if any target element is already occupied.
    void insert(const ResourceGrid &fragment, int k0, int l0);

    // Elementwise scaling by a weight matrix of the same shape.
    void apply_weights(const Eigen::MatrixXd &weights);

    const Eigen::MatrixXcd &values() const { return values_; }
    const Mask &mask() const { return mask_; }
    Index occupied_count() const { return mask_.count(); }

private:
    void check_bounds(int k, int l) const;

    Eigen::MatrixXcd values_;
    Mask mask_;
};

} // namespace hstpos
