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

#include "hstpos/resource_grid.hpp"

namespace hstpos {

ResourceGrid::ResourceGrid(int subcarriers, int symbols)
    : values_(Eigen::MatrixXcd::Zero(subcarriers, symbols)), mask_(Mask::Constant(subcarriers, symbols, false))
{
    if (subcarriers < 0 || symbols < 0)
        throw std::invalid_argument("ResourceGrid: negative dimensions");
}

void ResourceGrid::check_bounds(int k, int l) const
{
    if (k < 0 || k >= subcarriers() || l < 0 || l >= symbols())
        throw std::out_of_range("ResourceGrid: element (" + std::to_string(k) + ", " + std::to_string(l) +
                                ") outside the grid");
}

void ResourceGrid::set(int k, int l, cdouble v, bool overwrite)
{
    check_bounds(k, l);
    if (mask_(k, l) && !overwrite)
        throw OccupancyConflict("ResourceGrid: element (" + std::to_string(k) + ", " + std::to_string(l) +
                                ") is already occupied");
    values_(k, l) = v;
    mask_(k, l) = true;
}

void ResourceGrid::reserve(int k0, int l0, int nk, int nl)
{
    if (nk <= 0 || nl <= 0)
        return;
    check_bounds(k0, l0);
    check_bounds(k0 + nk - 1, l0 + nl - 1);
    mask_.block(k0, l0, nk, nl) = true;
}

void ResourceGrid::insert(const ResourceGrid &fragment, int k0, int l0)
{
    const int nk = fragment.subcarriers();
    const int nl = fragment.symbols();
    if (nk == 0 || nl == 0)
        return;
    check_bounds(k0, l0);
    check_bounds(k0 + nk - 1, l0 + nl - 1);
    if ((mask_.block(k0, l0, nk, nl) && fragment.mask_).any())
        throw OccupancyConflict("ResourceGrid: fragment overlaps occupied elements at symbol " + std::to_string(l0));
    for (int l = 0; l < nl; ++l)
        for (int k = 0; k < nk; ++k)
            if (fragment.mask_(k, l))
            {
                values_(k0 + k, l0 + l) = fragment.values_(k, l);
                mask_(k0 + k, l0 + l) = true;
            }
}

void ResourceGrid::apply_weights(const Eigen::MatrixXd &weights)
{
    if (weights.rows() != values_.rows() || weights.cols() != values_.cols())
        throw std::invalid_argument("ResourceGrid::apply_weights: shape mismatch");
    values_.array() *= weights.array().cast<cdouble>();
}

} // namespace hstpos
