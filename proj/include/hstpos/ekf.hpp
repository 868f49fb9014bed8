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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "hstpos/common.hpp"

namespace hstpos {

// State layout: [x, y, vx, vy, ax, ay].
template <typename Scalar>
using StateVec = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using StateMat = Eigen::Matrix<Scalar, 6, 6>;

// Constant-acceleration transition [I, dt I, dt^2/2 I; 0, I, dt I; 0, 0, I].
template <typename Scalar>
StateMat<Scalar> build_F(Scalar dt)
{
    if (!(dt >= Scalar(0)))
        throw std::invalid_argument("build_F: dt must be non-negative");
    StateMat<Scalar> f = StateMat<Scalar>::Identity();
    const auto i2 = Eigen::Matrix<Scalar, 2, 2>::Identity();
    f.template block<2, 2>(0, 2) = dt * i2;
    f.template block<2, 2>(0, 4) = (dt * dt / Scalar(2)) * i2;
    f.template block<2, 2>(2, 4) = dt * i2;
    return f;
}

// Process noise of the constant-acceleration model, scaled by sigma_a2.
template <typename Scalar>
StateMat<Scalar> build_Q(Scalar dt, Scalar sigma_a2)
{
    if (!(dt > Scalar(0)) || !(sigma_a2 >= Scalar(0)))
        throw std::invalid_argument("build_Q: need dt > 0 and sigma_a2 >= 0");
    const Scalar d2 = dt * dt, d3 = d2 * dt, d4 = d3 * dt, d5 = d4 * dt;
    Eigen::Matrix<Scalar, 3, 3> q;
    q << d5 / 20, d4 / 8, d3 / 6,
         d4 / 8,  d3 / 3, d2 / 2,
         d3 / 6,  d2 / 2, dt;
    StateMat<Scalar> out = StateMat<Scalar>::Zero();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
        {
            out(2 * r, 2 * c) = sigma_a2 * q(r, c);
            out(2 * r + 1, 2 * c + 1) = sigma_a2 * q(r, c);
        }
    return out;
}

template <typename Scalar>
struct StateEstimate
{
    StateVec<Scalar> s = StateVec<Scalar>::Zero();
    StateMat<Scalar> P = StateMat<Scalar>::Identity();
    int epoch_index = 0;
};

template <typename Scalar>
struct MotionModel
{
    Scalar dt = Scalar(0.1);
    Scalar sigma_a2 = Scalar(1);

    StateMat<Scalar> F() const { return build_F(dt); }
    StateMat<Scalar> Q() const { return build_Q(dt, sigma_a2); }
};

template <typename Scalar>
StateEstimate<Scalar> predict(const StateEstimate<Scalar> &est, const MotionModel<Scalar> &model)
{
    const StateMat<Scalar> f = model.F();
    StateEstimate<Scalar> out;
    out.s = f * est.s;
    out.P = f * est.P * f.transpose() + model.Q();
    out.P = (out.P + out.P.transpose()) / Scalar(2);
    out.epoch_index = est.epoch_index + 1;
    return out;
}

enum class MeasurementMode
{
    aod,
    toa,
    both
};

// Which rows of the per-RRH [angle, delay] pair enter the update.
inline bool uses_aod(MeasurementMode m) { return m != MeasurementMode::toa; }
inline bool uses_toa(MeasurementMode m) { return m != MeasurementMode::aod; }

struct RrhObservation
{
    Vec2 rrh_position = Vec2::Zero();
    double aod = 0.0; // rad
    double toa = 0.0; // s
};

struct MeasurementNoise
{
    double sigma_theta = deg2rad(1.3) / 1.96;        // rad
    double sigma_tau = 1.6 / kSpeedOfLight / 1.96;   // s

    void validate() const;
};

// Stacked [angle(p - p_k), |p - p_k| / c] for every RRH, in input order.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> measurement_fn(const StateVec<Scalar> &s, std::span<const Vec2> rrhs,
                                                        Scalar c = Scalar(kSpeedOfLight))
{
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h(2 * static_cast<Index>(rrhs.size()));
    for (std::size_t k = 0; k < rrhs.size(); ++k)
    {
        const Scalar dx = s(0) - Scalar(rrhs[k].x());
        const Scalar dy = s(1) - Scalar(rrhs[k].y());
        const Scalar r = std::hypot(dx, dy);
        if (!(r > Scalar(0)))
            throw DegenerateGeometryError("measurement_fn: train position coincides with an RRH");
        h(2 * k) = std::atan2(dy, dx);
        h(2 * k + 1) = r / c;
    }
    return h;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 6> jacobian(const StateVec<Scalar> &s, std::span<const Vec2> rrhs,
                                                  Scalar c = Scalar(kSpeedOfLight))
{
    Eigen::Matrix<Scalar, Eigen::Dynamic, 6> H =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 6>::Zero(2 * static_cast<Index>(rrhs.size()), 6);
    for (std::size_t k = 0; k < rrhs.size(); ++k)
    {
        const Scalar dx = s(0) - Scalar(rrhs[k].x());
        const Scalar dy = s(1) - Scalar(rrhs[k].y());
        const Scalar r2 = dx * dx + dy * dy;
        if (!(r2 > Scalar(0)))
            throw DegenerateGeometryError("jacobian: train position coincides with an RRH");
        const Scalar r = std::sqrt(r2);
        H(2 * k, 0) = -dy / r2;
        H(2 * k, 1) = dx / r2;
        H(2 * k + 1, 0) = dx / (c * r);
        H(2 * k + 1, 1) = dy / (c * r);
    }
    return H;
}

// Kalman update with a precomputed innovation. `angle_rows` marks rows whose
// innovation is an angle and gets wrapped to (-pi, pi].
template <typename Scalar>
StateEstimate<Scalar> kalman_update(const StateEstimate<Scalar> &prior,
                                    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> innovation,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 6> &H,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &W,
                                    const std::vector<bool> &angle_rows = {})
{
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    for (std::size_t i = 0; i < angle_rows.size(); ++i)
        if (angle_rows[i])
            innovation(static_cast<Index>(i)) = wrap_angle(innovation(static_cast<Index>(i)));

    const Mat PHt = prior.P * H.transpose();
    Mat S = H * PHt + W;
    S = (S + S.transpose()) / Scalar(2);
    Eigen::LLT<Mat> llt(S);
    if (llt.info() != Eigen::Success)
        throw SingularUpdateError("kalman_update: innovation covariance is not positive definite");
    // K = P H^T S^-1, via S K^T = H P.
    const Eigen::Matrix<Scalar, 6, Eigen::Dynamic> K = llt.solve(PHt.transpose()).transpose();
    if (!K.allFinite())
        throw SingularUpdateError("kalman_update: non-finite gain");

    StateEstimate<Scalar> post;
    post.epoch_index = prior.epoch_index;
    post.s = prior.s + K * innovation;
    post.P = (StateMat<Scalar>::Identity() - K * H) * prior.P;
    post.P = (post.P + post.P.transpose()) / Scalar(2);
    return post;
}

// Squared Mahalanobis distance of one RRH's innovation under the prior.
double innovation_distance2(const StateEstimate<double> &prior, const RrhObservation &meas,
                            const MeasurementNoise &noise, MeasurementMode mode);

// EKF update with the rows selected by `mode`. An RRH whose innovation lies
// more than `gate` standard deviations (Mahalanobis) from the prediction is
// dropped; if every RRH is dropped the prior comes back unchanged. The
// default gate accepts everything.
StateEstimate<double> update(const StateEstimate<double> &prior, std::span<const RrhObservation> meas,
                             const MeasurementNoise &noise, MeasurementMode mode = MeasurementMode::both,
                             double gate = std::numeric_limits<double>::infinity());

struct EpochMeasurements
{
    std::vector<RrhObservation> observations; // empty = missed epoch
};

// Posterior at `init.epoch_index` is taken as given; for each following entry
// the filter predicts and, if the epoch has measurements, updates. A singular
// update keeps the prediction. Returns one estimate per entry of `epochs`
// after the first.
std::vector<StateEstimate<double>> run_filter(std::span<const EpochMeasurements> epochs,
                                              const MotionModel<double> &model, const StateEstimate<double> &init,
                                              const MeasurementNoise &noise,
                                              MeasurementMode mode = MeasurementMode::both,
                                              double gate = std::numeric_limits<double>::infinity());

// Default initial covariance diag(100^2, 1, 50^2, 1, 10^2, 1).
StateMat<double> default_initial_covariance();

// Cold start from one RRH observation. TOA modes intersect the delay circle
// with y = 0; AOD mode intersects the departure ray with y = 0. Among two
// candidates the one closer to `x_hint` wins. Velocity and acceleration start
// at zero.
std::optional<StateEstimate<double>> initialize_state(const RrhObservation &obs, MeasurementMode mode, double x_hint,
                                                      const StateMat<double> &P0 = default_initial_covariance());

} // namespace hstpos
