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

#include "hstpos/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace hstpos {

void ArrayConfig::validate() const
{
    if (tx_elements < 1)
        throw ConfigError("antenna.tx_elements", "must be at least 1");
    if (rx_elements < 1)
        throw ConfigError("antenna.rx_elements", "must be at least 1");
    if (!(element_spacing > 0.0))
        throw ConfigError("antenna.element_spacing", "must be positive");
}

void EstimatorConfig::validate() const
{
    if (!(detection_sigmas >= 0.0) || !std::isfinite(detection_sigmas))
        throw ConfigError("estimator.detection_sigmas", "must be non-negative and finite");
}

void TrackerConfig::validate() const
{
    noise.validate();
    if (!(sigma_a2 >= 0.0) || !std::isfinite(sigma_a2))
        throw ConfigError("ekf.sigma_a2", "must be non-negative and finite");
    if (!(gate_sigmas > 0.0))
        throw ConfigError("ekf.gate_sigmas", "must be positive (inf disables gating)");
}

int SimConfig::resolved_epochs() const
{
    if (num_epochs)
        return *num_epochs;
    // Every epoch at which the profile is defined and the train is still on
    // the deployed track.
    const double t_end = track.duration();
    int n = 0;
    for (;; ++n)
    {
        const double t = n * epoch_interval;
        if (t > t_end)
            break;
        if (kinematics_at(track, t).position.x() > deployment.track_length)
            break;
    }
    return n;
}

void SimConfig::validate() const
{
    link.validate();
    deployment.validate();
    track.validate();
    numerology.validate();
    block_layout.validate(numerology);
    burst.validate(numerology, block_layout);
    shadowing.validate();
    fading.validate();
    arrays.validate();
    estimator.validate();
    tracker.validate();
    if (!(epoch_interval > 0.0))
        throw ConfigError("simulation.epoch_interval", "must be positive");
    if (num_serving < 1)
        throw ConfigError("simulation.num_serving", "must be at least 1");
    if (num_interferers < 0)
        throw ConfigError("simulation.num_interferers", "must be non-negative");
    if (num_epochs)
    {
        if (*num_epochs < 0)
            throw ConfigError("simulation.num_epochs", "must be non-negative");
        if (*num_epochs > 0 && (*num_epochs - 1) * epoch_interval > track.duration() + 1e-9)
            throw ConfigError("simulation.num_epochs", "runs past the end of the track profile (" +
                                                           std::to_string(track.duration()) + " s)");
    }
}

MeasurementMode parse_mode(std::string_view name)
{
    if (name == "aod")
        return MeasurementMode::aod;
    if (name == "toa")
        return MeasurementMode::toa;
    if (name == "both")
        return MeasurementMode::both;
    throw ConfigError("simulation.mode", "expected one of aod, toa, both; got '" + std::string(name) + "'");
}

std::string_view mode_name(MeasurementMode mode)
{
    switch (mode)
    {
    case MeasurementMode::aod:
        return "aod";
    case MeasurementMode::toa:
        return "toa";
    case MeasurementMode::both:
        return "both";
    }
    return "both";
}

namespace {

// Reads typed values from one table and remembers which keys were consumed so
// that leftovers can be reported.
class Section
{
public:
    Section(const toml::table *tbl, std::string name) : tbl_(tbl), name_(std::move(name)) {}

    std::string path(std::string_view key) const { return name_ + "." + std::string(key); }

    const toml::node *take(std::string_view key)
    {
        if (!tbl_)
            return nullptr;
        const toml::node *n = tbl_->get(key);
        if (n)
            used_.insert(std::string(key));
        return n;
    }

    void read(std::string_view key, double &dst, double scale = 1.0)
    {
        if (const auto *n = take(key))
            dst = as_double(*n, path(key)) * scale;
    }

    void read(std::string_view key, int &dst)
    {
        if (const auto *n = take(key))
            dst = as_int(*n, path(key));
    }

    void read(std::string_view key, bool &dst)
    {
        if (const auto *n = take(key))
        {
            if (!n->is_boolean())
                throw ConfigError(path(key), "expected a boolean");
            dst = n->as_boolean()->get();
        }
    }

    std::optional<std::string> string(std::string_view key)
    {
        if (const auto *n = take(key))
        {
            if (!n->is_string())
                throw ConfigError(path(key), "expected a string");
            return n->as_string()->get();
        }
        return std::nullopt;
    }

    void finish() const
    {
        if (!tbl_)
            return;
        for (const auto &[k, v] : *tbl_)
            if (!used_.contains(std::string(k.str())))
                throw ConfigError(path(k.str()), "unknown key");
    }

    static double as_double(const toml::node &n, const std::string &where)
    {
        if (n.is_floating_point())
            return n.as_floating_point()->get();
        if (n.is_integer())
            return static_cast<double>(n.as_integer()->get());
        throw ConfigError(where, "expected a number");
    }

    static int as_int(const toml::node &n, const std::string &where)
    {
        if (!n.is_integer())
            throw ConfigError(where, "expected an integer");
        const auto v = n.as_integer()->get();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            throw ConfigError(where, "integer out of range");
        return static_cast<int>(v);
    }

private:
    const toml::table *tbl_;
    std::string name_;
    std::set<std::string> used_;
};

std::vector<double> read_number_array(const toml::node &n, const std::string &where)
{
    const auto *arr = n.as_array();
    if (!arr)
        throw ConfigError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i)
        out.push_back(Section::as_double(*arr->get(i), where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<int> read_int_array(const toml::node &n, const std::string &where)
{
    const auto *arr = n.as_array();
    if (!arr)
        throw ConfigError(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < arr->size(); ++i)
        out.push_back(Section::as_int(*arr->get(i), where + "[" + std::to_string(i) + "]"));
    return out;
}

const toml::table *section_table(const toml::table &root, std::string_view name)
{
    const toml::node *n = root.get(name);
    if (!n)
        return nullptr;
    if (!n->is_table())
        throw ConfigError(std::string(name), "expected a table");
    return n->as_table();
}

} // namespace

SimConfig parse_config(std::string_view text)
{
    toml::table root;
    try
    {
        root = toml::parse(text);
    }
    catch (const toml::parse_error &e)
    {
        std::ostringstream os;
        os << "syntax error at line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
           << e.description();
        throw ConfigError("", os.str());
    }

    static const std::set<std::string> sections{"deployment", "track",   "numerology", "ss_block", "burst",
                                                "link",       "shadowing", "fading",   "antenna",  "estimator", "ekf",
                                                "simulation", "output"};
    for (const auto &[k, v] : root)
        if (!sections.contains(std::string(k.str())))
            throw ConfigError(std::string(k.str()), "unknown section");

    SimConfig cfg;

    {
        Section s(section_table(root, "link"), "link");
        s.read("carrier_freq", cfg.link.carrier_freq);
        s.read("tx_power_dbm", cfg.link.tx_power_dbm);
        s.read("noise_figure_db", cfg.link.noise_figure_db);
        s.read("noise_psd_dbm_hz", cfg.link.noise_psd_dbm_hz);
        s.read("bandwidth_hz", cfg.link.bandwidth_hz);
        s.finish();
    }
    {
        Section s(section_table(root, "deployment"), "deployment");
        s.read("rrh_spacing", cfg.deployment.rrh_spacing);
        s.read("rrh_offset_y", cfg.deployment.rrh_offset_y);
        s.read("track_length", cfg.deployment.track_length);
        if (const auto *n = s.take("panel_boresights_deg"))
        {
            cfg.deployment.panel_boresights.clear();
            for (double d : read_number_array(*n, s.path("panel_boresights_deg")))
                cfg.deployment.panel_boresights.push_back(deg2rad(d));
        }
        s.finish();
        cfg.deployment.carrier_freq = cfg.link.carrier_freq;
        cfg.deployment.tx_power_dbm = cfg.link.tx_power_dbm;
    }
    {
        Section s(section_table(root, "track"), "track");
        if (auto profile = s.string("profile"))
        {
            if (*profile != "long_haul")
                throw ConfigError("track.profile", "only 'long_haul' is predefined; give segments instead");
        }
        s.read("initial_position_x", cfg.track.initial_position_x);
        s.read("initial_velocity", cfg.track.initial_velocity);
        s.read("max_velocity", cfg.track.max_velocity);
        if (const auto *n = s.take("segments"))
        {
            const auto *arr = n->as_array();
            if (!arr)
                throw ConfigError("track.segments", "expected an array of [duration, acceleration] pairs");
            cfg.track.segments.clear();
            for (std::size_t i = 0; i < arr->size(); ++i)
            {
                const std::string where = "track.segments[" + std::to_string(i) + "]";
                const auto pair = read_number_array(*arr->get(i), where);
                if (pair.size() != 2)
                    throw ConfigError(where, "expected [duration, acceleration]");
                cfg.track.segments.push_back({pair[0], pair[1]});
            }
        }
        s.finish();
    }
    {
        Section s(section_table(root, "numerology"), "numerology");
        s.read("scs_hz", cfg.numerology.scs_hz);
        s.read("fft_size", cfg.numerology.fft_size);
        s.read("active_subcarriers", cfg.numerology.active_subcarriers);
        s.read("cp_normal", cfg.numerology.cp_normal);
        s.read("cp_extended", cfg.numerology.cp_extended);
        s.read("symbols_per_slot", cfg.numerology.symbols_per_slot);
        s.read("slots_per_subframe", cfg.numerology.slots_per_subframe);
        s.finish();
    }
    {
        Section s(section_table(root, "ss_block"), "ss_block");
        s.read("prb_span", cfg.block_layout.prb_span);
        s.read("symbol_span", cfg.block_layout.symbol_span);
        s.read("pss_symbol", cfg.block_layout.pss_symbol);
        s.read("sss_symbol", cfg.block_layout.sss_symbol);
        s.finish();
    }
    {
        Section s(section_table(root, "burst"), "burst");
        s.read("num_blocks", cfg.burst.num_blocks);
        s.read("blocks_per_slot", cfg.burst.blocks_per_slot);
        if (const auto *n = s.take("block_start_symbols"))
            cfg.burst.block_start_symbols = read_int_array(*n, "burst.block_start_symbols");
        s.read("sweep_start_deg", cfg.burst.sweep_start, kPi / 180.0);
        s.read("sweep_stop_deg", cfg.burst.sweep_stop, kPi / 180.0);
        s.read("burst_period", cfg.burst.burst_period);
        s.finish();
    }
    {
        Section s(section_table(root, "shadowing"), "shadowing");
        s.read("enabled", cfg.shadowing.enabled);
        s.read("sigma_db", cfg.shadowing.sigma_db);
        s.read("decorrelation_distance", cfg.shadowing.decorrelation_distance);
        s.read("grid_step", cfg.shadowing.grid_step);
        s.finish();
    }
    {
        Section s(section_table(root, "fading"), "fading");
        s.read("enabled", cfg.fading.enabled);
        s.read("delay_spread", cfg.fading.delay_spread);
        s.read("num_sinusoids", cfg.fading.num_sinusoids);
        s.read("update_stride", cfg.fading.update_stride);
        s.finish();
    }
    {
        Section s(section_table(root, "antenna"), "antenna");
        s.read("tx_elements", cfg.arrays.tx_elements);
        s.read("rx_elements", cfg.arrays.rx_elements);
        s.read("element_spacing", cfg.arrays.element_spacing);
        s.finish();
    }
    {
        Section s(section_table(root, "estimator"), "estimator");
        s.read("detection_sigmas", cfg.estimator.detection_sigmas);
        s.finish();
    }
    {
        Section s(section_table(root, "ekf"), "ekf");
        double theta_deg = rad2deg(cfg.tracker.noise.sigma_theta);
        double range_m = cfg.tracker.noise.sigma_tau * kSpeedOfLight;
        s.read("sigma_theta_deg", theta_deg);
        s.read("sigma_range_m", range_m);
        s.read("sigma_a2", cfg.tracker.sigma_a2);
        s.read("gate_sigmas", cfg.tracker.gate_sigmas);
        s.finish();
        cfg.tracker.noise.sigma_theta = deg2rad(theta_deg);
        cfg.tracker.noise.sigma_tau = range_m / kSpeedOfLight;
    }
    {
        Section s(section_table(root, "simulation"), "simulation");
        if (auto m = s.string("mode"))
            cfg.mode = parse_mode(*m);
        s.read("epoch_interval", cfg.epoch_interval);
        if (const auto *n = s.take("num_epochs"))
            cfg.num_epochs = Section::as_int(*n, "simulation.num_epochs");
        if (const auto *n = s.take("seed"))
        {
            if (!n->is_integer() || n->as_integer()->get() < 0)
                throw ConfigError("simulation.seed", "expected a non-negative integer");
            cfg.master_seed = static_cast<std::uint64_t>(n->as_integer()->get());
        }
        s.read("num_serving", cfg.num_serving);
        s.read("num_interferers", cfg.num_interferers);
        s.finish();
    }
    {
        Section s(section_table(root, "output"), "output");
        if (auto dir = s.string("dir"))
            cfg.output_dir = *dir;
        s.finish();
    }

    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("", "cannot read config file " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return parse_config(os.str());
}

} // namespace hstpos
