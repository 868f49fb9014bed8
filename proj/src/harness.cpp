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

#include "hstpos/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hstpos/fading.hpp"
#include "hstpos/link_budget.hpp"
#include "hstpos/ofdm.hpp"
#include "hstpos/propagation.hpp"
#include "hstpos/rng.hpp"

namespace hstpos {

double nearest_rank(std::span<const double> sorted, double p)
{
    if (sorted.empty())
        return 0.0;
    if (!(p > 0.0 && p <= 100.0))
        throw std::invalid_argument("nearest_rank: p must lie in (0, 100]");
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n - 1e-12));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

ErrorStats error_stats(std::vector<double> values)
{
    ErrorStats s;
    s.count = values.size();
    if (values.empty())
        return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.pct.p50 = nearest_rank(values, 50);
    s.pct.p75 = nearest_rank(values, 75);
    s.pct.p90 = nearest_rank(values, 90);
    s.pct.p95 = nearest_rank(values, 95);
    s.pct.p99 = nearest_rank(values, 99);
    return s;
}

namespace {

constexpr std::uint64_t kNoRrh = ~std::uint64_t{0};

double track_end_x(const SimConfig &cfg)
{
    const double t_end = std::max(0.0, (cfg.resolved_epochs() - 1) * cfg.epoch_interval);
    return kinematics_at(cfg.track, std::min(t_end, cfg.track.duration())).position.x();
}

std::vector<int> site_ids(const std::vector<RrhSite> &sites)
{
    std::vector<int> ids;
    ids.reserve(sites.size());
    for (const auto &s : sites)
        ids.push_back(s.id);
    return ids;
}

} // namespace

Scenario::Scenario(const SimConfig &cfg) : cfg_(cfg), sites_(deploy_rrhs(cfg.deployment)), bank_(32)
{
    cfg_.validate();
    burst_ = burst_layout(cfg_.burst, cfg_.numerology, cfg_.block_layout);

    // One extra slot after the burst keeps the last block's search window
    // inside the received samples.
    const Index needed = correlation_lags(burst_) + burst_.block_samples - 1;
    int slots = cfg_.burst.num_slots();
    while (cfg_.numerology.samples_for_symbols(slots * cfg_.numerology.symbols_per_slot) < needed)
        ++slots;
    frame_symbols_ = slots * cfg_.numerology.symbols_per_slot;
    window_ = cfg_.numerology.samples_for_symbols(frame_symbols_);

    const auto ids = site_ids(sites_);
    const double margin = 2.0 * cfg_.deployment.rrh_spacing;
    const double x_lo = std::min(cfg_.track.initial_position_x, 0.0) - margin;
    const double x_hi = std::max(track_end_x(cfg_), cfg_.track.initial_position_x) + margin;
    ShadowingParams sp = cfg_.shadowing;
    if (!sp.enabled)
        sp.sigma_db = 0.0;
    shadowing_ = ShadowingField(ids, x_lo, x_hi, sp, cfg_.master_seed);
}

Buffer Scenario::transmit_stream(const RrhSite &site, const Vec2 &train, int epoch) const
{
    const auto &num = cfg_.numerology;
    const LosGeometry g = los_geometry(train, site);

    UlaConfig ula{cfg_.arrays.tx_elements, cfg_.arrays.element_spacing, 0.0};
    std::vector<double> block_amp(burst_.blocks.size());
    for (std::size_t i = 0; i < burst_.blocks.size(); ++i)
    {
        const double steer = burst_.blocks[i].sweep_angle;
        ula.boresight = site.panel_boresights[static_cast<std::size_t>(nearest_panel(site.panel_boresights, steer))];
        block_amp[i] = std::sqrt(db2lin(panel_gain(ula, steer, g.aod)));
    }
    // Data beams follow the train.
    ula.boresight = site.panel_boresights[static_cast<std::size_t>(nearest_panel(site.panel_boresights, g.aod))];
    const double data_amp = std::sqrt(db2lin(panel_gain(ula, g.aod, g.aod)));

    const auto id = static_cast<std::uint64_t>(site.id);
    const auto ep = static_cast<std::uint64_t>(epoch);
    ResourceGrid grid(num.active_subcarriers, frame_symbols_);
    schedule_burst_set(cfg_.burst, num, grid, site.cell, substream_seed(cfg_.master_seed, ep, id, Purpose::data),
                       DataFill::full_buffer, cfg_.block_layout, BlockContent::full);
    grid.apply_weights(beam_weight_map(num.active_subcarriers, frame_symbols_, burst_, block_amp, data_amp));
    Buffer x = ofdm_modulate(grid, num, num.nominal_scale());

    const double fs = num.sample_rate();
    if (cfg_.fading.enabled)
    {
        const TrainKinematics kin = kinematics_at(cfg_.track, epoch * cfg_.epoch_interval);
        const double speed = kin.velocity.norm();
        const double fd = max_doppler(speed, cfg_.link.carrier_freq);
        // LOS Doppler: projection of the velocity on the direction to the RRH.
        const Vec2 to_rrh = (site.position - train) / g.distance;
        const double los = speed > 0.0 ? fd * kin.velocity.dot(to_rrh) / speed : 0.0;
        const auto taps = tdl_d_taps(static_cast<double>(x.size()) / fs, fs, fd,
                                     substream_seed(cfg_.master_seed, ep, id, Purpose::fading), cfg_.fading, los);
        x = fade(x, taps);
    }

    const double shadow = cfg_.shadowing.enabled ? shadowing_.at(site.id, train.x()) : 0.0;
    // Transmit beam gains already sit in the resource-element weights; the
    // receive gain is applied per train panel.
    x *= std::sqrt(db2lin(received_power(cfg_.link, g.distance, shadow, 0.0, 0.0)));
    return x;
}

std::array<Buffer, 2> Scenario::received_windows(int epoch, std::vector<RrhSite> *serving) const
{
    const double t = epoch * cfg_.epoch_interval;
    const Vec2 train = kinematics_at(cfg_.track, t).position;
    // Serving and transmitting sets follow the shadowing-free power ranking,
    // so the serving set only changes at the midpoints between sites.
    const auto n_serving = static_cast<std::size_t>(cfg_.num_serving);
    const auto ranked = select_serving_rrhs(train, sites_, std::max(n_serving, static_cast<std::size_t>(cfg_.num_interferers)),
                                            cfg_.link.carrier_freq);
    const std::size_t n_tx = ranked.size();

    if (serving)
        serving->assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(n_serving, n_tx)));

    const double fs = cfg_.numerology.sample_rate();
    struct Arrival
    {
        Buffer samples;
        Index delay;
        double direction; // train -> RRH, global frame
    };
    std::vector<Arrival> arrivals;
    arrivals.reserve(n_tx);
    for (std::size_t i = 0; i < n_tx; ++i)
    {
        const RrhSite &site = ranked[i];
        const Vec2 d = site.position - train;
        arrivals.push_back({transmit_stream(site, train, epoch),
                            static_cast<Index>(std::llround(d.norm() * fs / kSpeedOfLight)), std::atan2(d.y(), d.x())});
    }

    // Each panel keeps its beam fixed along its boresight.
    std::array<Buffer, 2> out;
    const std::array<double, 2> boresights{kTrainNoseBoresight, kTrainTailBoresight};
    for (std::size_t p = 0; p < 2; ++p)
    {
        const UlaConfig rx{cfg_.arrays.rx_elements, cfg_.arrays.element_spacing, boresights[p]};
        std::vector<DelayedStream> streams;
        streams.reserve(arrivals.size());
        for (const auto &a : arrivals)
            streams.push_back(
                {a.samples * std::sqrt(db2lin(panel_gain(rx, boresights[p], a.direction))), a.delay});
        out[p] = superpose_rrhs(streams, noise_floor(cfg_.link),
                                substream_seed(cfg_.master_seed, static_cast<std::uint64_t>(epoch), kNoRrh - p,
                                               Purpose::noise),
                                window_);
    }
    return out;
}

EpochObservation Scenario::observe(int epoch) const
{
    EpochObservation obs;
    obs.epoch = epoch;
    obs.time = epoch * cfg_.epoch_interval;
    obs.truth = kinematics_at(cfg_.track, obs.time);

    std::vector<RrhSite> serving;
    const auto rx = received_windows(epoch, &serving);
    std::array<std::optional<SyncReceiver>, 2> receivers;
    for (const auto &site : serving)
    {
        obs.serving_ids.push_back(site.id);
        const LosGeometry g = los_geometry(obs.truth.position, site);
        auto &receiver = receivers[static_cast<std::size_t>(g.rx_panel)];
        if (!receiver)
            receiver.emplace(rx[static_cast<std::size_t>(g.rx_panel)], cfg_.burst, cfg_.numerology,
                             cfg_.block_layout, &bank_, cfg_.estimator.detection_sigmas);
        const auto m = receiver->measure(site, obs.time);
        if (!m)
            continue;
        MeasurementRecord r;
        r.epoch = epoch;
        r.time = obs.time;
        r.rrh_id = site.id;
        r.rrh_position = site.position;
        r.aod_estimate = m->aod_estimate;
        r.aod_true = g.aod;
        r.toa_estimate = m->toa_estimate;
        r.toa_true = g.distance / kSpeedOfLight;
        r.delay_samples = m->delay_samples;
        r.detected_blocks = m->num_detected_blocks;
        obs.measurements.push_back(r);
    }
    return obs;
}

std::vector<EpochObservation> synthesize_observations(const Scenario &scenario, unsigned workers)
{
    const int n = scenario.config().resolved_epochs();
    std::vector<EpochObservation> out(static_cast<std::size_t>(std::max(n, 0)));
    if (n <= 0)
        return out;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int e = next++; e < n; e = next++)
        {
            try
            {
                out[static_cast<std::size_t>(e)] = scenario.observe(e);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = n;
            }
        }
    };
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

namespace {

std::vector<RrhObservation> to_observations(const EpochObservation &obs)
{
    std::vector<RrhObservation> out;
    out.reserve(obs.measurements.size());
    for (const auto &m : obs.measurements)
        out.push_back({m.rrh_position, m.aod_estimate, m.toa_estimate});
    return out;
}

} // namespace

std::vector<EpochRecord> track(const SimConfig &cfg, std::span<const EpochObservation> observations,
                               MeasurementMode mode)
{
    std::vector<EpochRecord> records(observations.size());
    for (std::size_t e = 0; e < observations.size(); ++e)
    {
        auto &r = records[e];
        r.epoch = observations[e].epoch;
        r.time = observations[e].time;
        r.truth = observations[e].truth;
        r.num_serving = static_cast<int>(observations[e].serving_ids.size());
        r.num_measurements = static_cast<int>(observations[e].measurements.size());
    }

    // Cold start at the first epoch whose measurements admit an initial fix.
    std::optional<StateEstimate<double>> init;
    std::size_t e0 = 0;
    for (; e0 < observations.size() && !init; ++e0)
        for (const auto &o : to_observations(observations[e0]))
            if ((init = initialize_state(o, mode, cfg.track.initial_position_x)))
                break;
    if (!init)
        return records;
    --e0;
    init->epoch_index = static_cast<int>(e0);

    std::vector<EpochMeasurements> epochs;
    epochs.reserve(observations.size() - e0);
    for (std::size_t e = e0; e < observations.size(); ++e)
        epochs.push_back({to_observations(observations[e])});

    MotionModel<double> model;
    model.dt = cfg.epoch_interval;
    model.sigma_a2 = cfg.tracker.sigma_a2;
    const auto states = run_filter(epochs, model, *init, cfg.tracker.noise, mode, cfg.tracker.gate_sigmas);

    auto fill = [&](std::size_t e, const StateEstimate<double> &est) {
        auto &r = records[e];
        r.tracked = true;
        r.estimate = est.s;
        r.position_error = (est.s.head<2>() - r.truth.position).norm();
    };
    fill(e0, *init);
    for (std::size_t i = 0; i < states.size(); ++i)
        fill(e0 + 1 + i, states[i]);
    return records;
}

MetricsSummary compute_metrics(std::span<const EpochRecord> epochs, std::span<const MeasurementRecord> measurements)
{
    MetricsSummary s;
    s.num_epochs = epochs.size();
    std::vector<double> pos;
    std::size_t sub_meter = 0;
    for (const auto &r : epochs)
    {
        if (!r.tracked)
            continue;
        pos.push_back(r.position_error);
        if (r.position_error < 1.0)
            ++sub_meter;
    }
    s.num_tracked = pos.size();
    s.sub_meter_availability = pos.empty() ? 0.0 : static_cast<double>(sub_meter) / static_cast<double>(pos.size());
    s.position = error_stats(std::move(pos));

    std::vector<double> ang, dist;
    for (const auto &m : measurements)
    {
        ang.push_back(m.angle_error_deg());
        dist.push_back(m.distance_error_m());
    }
    s.angle = error_stats(std::move(ang));
    s.distance = error_stats(std::move(dist));
    return s;
}

std::vector<MeasurementRecord> collect_measurements(std::span<const EpochObservation> observations)
{
    std::vector<MeasurementRecord> out;
    for (const auto &o : observations)
        out.insert(out.end(), o.measurements.begin(), o.measurements.end());
    return out;
}

SimulationResult run_simulation(const SimConfig &cfg, unsigned workers)
{
    const Scenario scenario(cfg);
    const auto observations = synthesize_observations(scenario, workers);
    SimulationResult result;
    result.epochs = track(scenario.config(), observations, scenario.config().mode);
    result.measurements = collect_measurements(observations);
    result.summary = compute_metrics(result.epochs, result.measurements);
    return result;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char *kEpochHeader = "epoch,time,true_x,true_y,true_vx,true_vy,true_ax,true_ay,"
                                     "est_x,est_y,est_vx,est_vy,est_ax,est_ay,position_error,"
                                     "num_serving,num_measurements,tracked";
constexpr const char *kMeasurementHeader = "epoch,time,rrh_id,rrh_x,rrh_y,aod_est,aod_true,toa_est,toa_true,"
                                           "delay_samples,detected_blocks,angle_error_deg,distance_error_m";

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

void check_written(std::ofstream &os, const std::filesystem::path &path)
{
    os.flush();
    if (!os)
        throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double to_double(const std::string &s, const std::filesystem::path &path, std::size_t line)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception &)
    {
        throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path &path, const char *header)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line) || line != header)
        throw std::runtime_error(path.string() + ": unexpected header");
    const std::size_t cols = split(header).size();
    std::vector<std::vector<std::string>> rows;
    std::size_t n = 1;
    while (std::getline(is, line))
    {
        ++n;
        if (line.empty())
            continue;
        auto cells = split(line);
        if (cells.size() != cols)
            throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": expected " + std::to_string(cols) +
                                     " columns");
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

void write_summary_csv(const std::filesystem::path &path, const MetricsSummary &s)
{
    auto os = open_out(path);
    os << "metric,value\n";
    auto row = [&](const char *name, double v) { os << name << ',' << fmt(v) << '\n'; };
    auto stats = [&](const std::string &prefix, const ErrorStats &e) {
        row((prefix + "_count").c_str(), static_cast<double>(e.count));
        row((prefix + "_mean").c_str(), e.mean);
        row((prefix + "_p50").c_str(), e.pct.p50);
        row((prefix + "_p75").c_str(), e.pct.p75);
        row((prefix + "_p90").c_str(), e.pct.p90);
        row((prefix + "_p95").c_str(), e.pct.p95);
        row((prefix + "_p99").c_str(), e.pct.p99);
    };
    row("num_epochs", static_cast<double>(s.num_epochs));
    row("num_tracked", static_cast<double>(s.num_tracked));
    stats("position_error_m", s.position);
    row("sub_meter_availability", s.sub_meter_availability);
    stats("angle_error_deg", s.angle);
    stats("distance_error_m", s.distance);
    check_written(os, path);
}

void export_records(const std::filesystem::path &dir, std::span<const EpochRecord> epochs,
                    std::span<const MeasurementRecord> measurements, const MetricsSummary &summary)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    {
        const auto path = dir / "epochs.csv";
        auto os = open_out(path);
        os << kEpochHeader << '\n';
        for (const auto &r : epochs)
        {
            os << r.epoch << ',' << fmt(r.time);
            for (double v : {r.truth.position.x(), r.truth.position.y(), r.truth.velocity.x(), r.truth.velocity.y(),
                             r.truth.acceleration.x(), r.truth.acceleration.y()})
                os << ',' << fmt(v);
            for (Index i = 0; i < 6; ++i)
                os << ',' << fmt(r.estimate(i));
            os << ',' << fmt(r.position_error) << ',' << r.num_serving << ',' << r.num_measurements << ','
               << (r.tracked ? 1 : 0) << '\n';
        }
        check_written(os, path);
    }
    {
        const auto path = dir / "measurements.csv";
        auto os = open_out(path);
        os << kMeasurementHeader << '\n';
        for (const auto &m : measurements)
        {
            os << m.epoch << ',' << fmt(m.time) << ',' << m.rrh_id << ',' << fmt(m.rrh_position.x()) << ','
               << fmt(m.rrh_position.y()) << ',' << fmt(m.aod_estimate) << ',' << fmt(m.aod_true) << ','
               << fmt(m.toa_estimate) << ',' << fmt(m.toa_true) << ',' << m.delay_samples << ','
               << m.detected_blocks << ',' << fmt(m.angle_error_deg()) << ',' << fmt(m.distance_error_m()) << '\n';
        }
        check_written(os, path);
    }
    write_summary_csv(dir / "summary.csv", summary);
}

std::vector<EpochRecord> read_epochs_csv(const std::filesystem::path &path)
{
    std::vector<EpochRecord> out;
    std::size_t line = 1;
    for (const auto &c : read_table(path, kEpochHeader))
    {
        ++line;
        auto d = [&](std::size_t i) { return to_double(c[i], path, line); };
        EpochRecord r;
        r.epoch = static_cast<int>(d(0));
        r.time = d(1);
        r.truth.t = r.time;
        r.truth.position = {d(2), d(3)};
        r.truth.velocity = {d(4), d(5)};
        r.truth.acceleration = {d(6), d(7)};
        for (Index i = 0; i < 6; ++i)
            r.estimate(i) = d(8 + static_cast<std::size_t>(i));
        r.position_error = d(14);
        r.num_serving = static_cast<int>(d(15));
        r.num_measurements = static_cast<int>(d(16));
        r.tracked = d(17) != 0.0;
        out.push_back(r);
    }
    return out;
}

std::vector<MeasurementRecord> read_measurements_csv(const std::filesystem::path &path)
{
    std::vector<MeasurementRecord> out;
    std::size_t line = 1;
    for (const auto &c : read_table(path, kMeasurementHeader))
    {
        ++line;
        auto d = [&](std::size_t i) { return to_double(c[i], path, line); };
        MeasurementRecord m;
        m.epoch = static_cast<int>(d(0));
        m.time = d(1);
        m.rrh_id = static_cast<int>(d(2));
        m.rrh_position = {d(3), d(4)};
        m.aod_estimate = d(5);
        m.aod_true = d(6);
        m.toa_estimate = d(7);
        m.toa_true = d(8);
        m.delay_samples = static_cast<Index>(d(9));
        m.detected_blocks = static_cast<int>(d(10));
        out.push_back(m);
    }
    return out;
}

} // namespace hstpos
