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

// Independent reference implementations used only by the tests. They are
// written for clarity, not speed, and share no code with the library paths
// they check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cdouble = std::complex<double>;

// r[m] = |sum_n rx[n + m] conj(ref[n])|, m in [0, lags).
inline Eigen::VectorXd direct_correlation(const Eigen::VectorXcd &rx, const Eigen::VectorXcd &ref, Eigen::Index lags)
{
    Eigen::VectorXd r(lags);
    for (Eigen::Index m = 0; m < lags; ++m)
    {
        cdouble acc = 0.0;
        for (Eigen::Index n = 0; n < ref.size(); ++n)
            acc += rx(n + m) * std::conj(ref(n));
        r(m) = std::abs(acc);
    }
    return r;
}

// y[n] = sum_t g_t x[n - d_t] for a time-invariant line.
inline Eigen::VectorXcd direct_convolution(const Eigen::VectorXcd &x, const std::vector<int> &delays,
                                           const std::vector<cdouble> &gains)
{
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n)
        for (std::size_t t = 0; t < delays.size(); ++t)
            if (n - delays[t] >= 0)
                y(n) += gains[t] * x(n - delays[t]);
    return y;
}

// Periodic autocorrelation of a real sequence at lag `lag`.
inline double periodic_autocorrelation(const Eigen::VectorXd &s, int lag)
{
    const auto n = s.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        acc += s(i) * s((i + lag) % n);
    return acc;
}

// Two-pass population mean and standard deviation.
inline std::pair<double, double> mean_std(const Eigen::VectorXd &v)
{
    double mean = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        mean += v(i);
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        var += (v(i) - mean) * (v(i) - mean);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

// Central finite-difference Jacobian of f: R^6 -> R^m.
template <typename F>
Eigen::MatrixXd finite_difference_jacobian(F &&f, const Eigen::Matrix<double, 6, 1> &s, double step)
{
    const Eigen::VectorXd f0 = f(s);
    Eigen::MatrixXd J(f0.size(), 6);
    for (int j = 0; j < 6; ++j)
    {
        Eigen::Matrix<double, 6, 1> hi = s, lo = s;
        hi(j) += step;
        lo(j) -= step;
        J.col(j) = (f(hi) - f(lo)) / (2.0 * step);
    }
    return J;
}

// Brute-force Bayesian filter for a scalar random walk x[n+1] = x[n] + w,
// w ~ N(0, q), observed through z = x + v, v ~ N(0, r). The posterior is
// propagated on a uniform grid by numerical convolution and pointwise
// multiplication; returns the posterior mean and variance after each step.
struct GridFilter
{
    Eigen::VectorXd grid;
    Eigen::VectorXd density;
    double q;
    double r;

    GridFilter(double lo, double hi, int n, double mean0, double var0, double q_, double r_) : q(q_), r(r_)
    {
        grid = Eigen::VectorXd::LinSpaced(n, lo, hi);
        density.resize(n);
        for (int i = 0; i < n; ++i)
            density(i) = std::exp(-0.5 * (grid(i) - mean0) * (grid(i) - mean0) / var0);
        density /= density.sum();
    }

    void step(double z)
    {
        const int n = static_cast<int>(grid.size());
        Eigen::VectorXd predicted = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                const double d = grid(i) - grid(j);
                predicted(i) += density(j) * std::exp(-0.5 * d * d / q);
            }
        for (int i = 0; i < n; ++i)
            predicted(i) *= std::exp(-0.5 * (z - grid(i)) * (z - grid(i)) / r);
        density = predicted / predicted.sum();
    }

    double mean() const { return grid.dot(density); }
    double variance() const
    {
        const double m = mean();
        return (grid.array() - m).square().matrix().dot(density);
    }
};

} // namespace oracle
