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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hstpos {

using cdouble = std::complex<double>;
using Index = Eigen::Index;

// Complex baseband sample stream.
using Buffer = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2d;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi)
        a += 2.0 * kPi;
    return a;
}

// Mean of |x|^2.
template <typename Derived>
double mean_power(const Eigen::MatrixBase<Derived> &x)
{
    if (x.size() == 0)
        return 0.0;
    return x.cwiseAbs2().sum() / static_cast<double>(x.size());
}

class OutOfRangeError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

class DegenerateGeometryError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

class ContractViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

class OccupancyConflict : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

class SingularUpdateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Configuration problem; key() holds the dotted path of the offending entry.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace hstpos
