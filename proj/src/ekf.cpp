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

#include "hstpos/ekf.hpp"

namespace hstpos {

void MeasurementNoise::validate() const
{
    if (!(sigma_theta > 0.0) || !std::isfinite(sigma_theta))
        throw ConfigError("ekf.sigma_theta_deg", "must be positive and finite");
    if (!(sigma_tau > 0.0) || !std::isfinite(sigma_tau))
        throw ConfigError("ekf.sigma_range_m", "must be positive and finite");
}

namespace {

struct SelectedRows
{
    Eigen::VectorXd innovation;
    Eigen::Matrix<double, Eigen::Dynamic, 6> H;
    Eigen::MatrixXd W;
    std::vector<bool> angle_rows;
};

SelectedRows select_rows(const StateEstimate<double> &prior, std::span<const RrhObservation> meas,
                         const MeasurementNoise &noise, MeasurementMode mode)
{
    std::vector<Vec2> sites;
    sites.reserve(meas.size());
    for (const auto &m : meas)
        sites.push_back(m.rrh_position);

    const Eigen::VectorXd h = measurement_fn<double>(prior.s, sites);
    const Eigen::Matrix<double, Eigen::Dynamic, 6> H_full = jacobian<double>(prior.s, sites);

    const bool aod = uses_aod(mode);
    const bool toa = uses_toa(mode);
    const Index per_rrh = (aod ? 1 : 0) + (toa ? 1 : 0);
    const Index rows = per_rrh * static_cast<Index>(meas.size());

    Eigen::VectorXd innovation(rows);
    Eigen::Matrix<double, Eigen::Dynamic, 6> H(rows, 6);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows, rows);
    std::vector<bool> angle_rows(static_cast<std::size_t>(rows), false);

    Index r = 0;
    for (std::size_t k = 0; k < meas.size(); ++k)
    {
        const Index base = 2 * static_cast<Index>(k);
        if (aod)
        {
            innovation(r) = meas[k].aod - h(base);
            H.row(r) = H_full.row(base);
            W(r, r) = noise.sigma_theta * noise.sigma_theta;
            angle_rows[static_cast<std::size_t>(r)] = true;
            ++r;
        }
        if (toa)
        {
            innovation(r) = meas[k].toa - h(base + 1);
            H.row(r) = H_full.row(base + 1);
            W(r, r) = noise.sigma_tau * noise.sigma_tau;
            ++r;
        }
    }
    for (Index i = 0; i < rows; ++i)
        if (angle_rows[static_cast<std::size_t>(i)])
            innovation(i) = wrap_angle(innovation(i));
    return {std::move(innovation), std::move(H), std::move(W), std::move(angle_rows)};
}

} // namespace

double innovation_distance2(const StateEstimate<double> &prior, const RrhObservation &meas,
                            const MeasurementNoise &noise, MeasurementMode mode)
{
    const auto sel = select_rows(prior, std::span(&meas, 1), noise, mode);
    Eigen::MatrixXd S = sel.H * prior.P * sel.H.transpose() + sel.W;
    S = (S + S.transpose()) / 2.0;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw SingularUpdateError("innovation_distance2: innovation covariance is not positive definite");
    return sel.innovation.dot(llt.solve(sel.innovation));
}

StateEstimate<double> update(const StateEstimate<double> &prior, std::span<const RrhObservation> meas,
                             const MeasurementNoise &noise, MeasurementMode mode, double gate)
{
    if (meas.empty())
        throw std::invalid_argument("update: at least one measurement required");
    if (!(gate > 0.0))
        throw std::invalid_argument("update: gate must be positive");

    std::vector<RrhObservation> kept;
    if (std::isfinite(gate))
    {
        for (const auto &m : meas)
            if (innovation_distance2(prior, m, noise, mode) <= gate * gate)
                kept.push_back(m);
        if (kept.empty())
            return prior;
        meas = kept;
    }
    const auto sel = select_rows(prior, meas, noise, mode);
    return kalman_update<double>(prior, sel.innovation, sel.H, sel.W, sel.angle_rows);
}

std::vector<StateEstimate<double>> run_filter(std::span<const EpochMeasurements> epochs,
                                              const MotionModel<double> &model, const StateEstimate<double> &init,
                                              const MeasurementNoise &noise, MeasurementMode mode, double gate)
{
    std::vector<StateEstimate<double>> out;
    if (epochs.size() <= 1)
        return out;
    out.reserve(epochs.size() - 1);
    StateEstimate<double> est = init;
    for (std::size_t e = 1; e < epochs.size(); ++e)
    {
        est = predict(est, model);
        if (!epochs[e].observations.empty())
        {
            try
            {
                est = update(est, epochs[e].observations, noise, mode, gate);
            }
            catch (const SingularUpdateError &)
            {
            }
            catch (const DegenerateGeometryError &)
            {
            }
        }
        out.push_back(est);
    }
    return out;
}

StateMat<double> default_initial_covariance()
{
    StateVec<double> d;
    d << 100.0 * 100.0, 1.0, 50.0 * 50.0, 1.0, 10.0 * 10.0, 1.0;
    return d.asDiagonal();
}

std::optional<StateEstimate<double>> initialize_state(const RrhObservation &obs, MeasurementMode mode, double x_hint,
                                                      const StateMat<double> &P0)
{
    const double xk = obs.rrh_position.x();
    const double yk = obs.rrh_position.y();
    double x = 0.0;
    if (uses_toa(mode))
    {
        const double d = kSpeedOfLight * obs.toa;
        if (!std::isfinite(d) || d < 0.0)
            return std::nullopt;
        // Quantized delays can fall just short of the perpendicular offset;
        // the closest point on the line is then the foot of the perpendicular.
        const double half = std::sqrt(std::max(0.0, d * d - yk * yk));
        const double a = xk - half;
        const double b = xk + half;
        x = std::abs(a - x_hint) <= std::abs(b - x_hint) ? a : b;
    }
    else
    {
        const double s = std::sin(obs.aod);
        if (std::abs(s) < 1e-9)
            return std::nullopt;
        const double t = -yk / s;
        if (!(t > 0.0))
            return std::nullopt;
        x = xk + t * std::cos(obs.aod);
    }
    StateEstimate<double> est;
    est.s.setZero();
    est.s(0) = x;
    est.P = P0;
    return est;
}

} // namespace hstpos
