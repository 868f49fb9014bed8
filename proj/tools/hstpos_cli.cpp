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

// Command-line front end: `simulate` runs a scenario and writes the CSV
// records, `metrics` recomputes the summary of an existing output directory.
//
// Exit codes: 0 success, 2 configuration or usage error, 1 runtime error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "hstpos/config.hpp"
#include "hstpos/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void print_summary(const hstpos::MetricsSummary &s)
{
    std::printf("epochs %zu, tracked %zu\n", s.num_epochs, s.num_tracked);
    std::printf("position error: mean %.3f m, p50 %.3f m, p95 %.3f m, sub-meter %.1f %%\n", s.position.mean,
                s.position.pct.p50, s.position.pct.p95, 100.0 * s.sub_meter_availability);
    std::printf("angle error:    p50 %.3f deg, p95 %.3f deg (%zu measurements)\n", s.angle.pct.p50, s.angle.pct.p95,
                s.angle.count);
    std::printf("distance error: p50 %.3f m, p95 %.3f m\n", s.distance.pct.p50, s.distance.pct.p95);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beam-sweep positioning simulator for high-speed trains"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string mode;
    std::optional<int> epochs;
    std::optional<double> track_length;
    unsigned workers = 0;

    auto *simulate = app.add_subcommand("simulate", "Synthesize bursts, estimate, track and write CSV records");
    simulate->add_option("--config", config_path, "Scenario file (TOML)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--seed", seed, "Master seed")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--mode", mode, "Measurements used by the tracker")
        ->check(CLI::IsMember({"aod", "toa", "both"}));
    simulate->add_option("--epochs", epochs, "Number of epochs (default: whole track)");
    simulate->add_option("--track-length", track_length, "Deployed track length in meters");
    simulate->add_option("--workers", workers, "Synthesis threads, 0 = all cores (results do not depend on it)");

    std::string in_dir;
    auto *metrics = app.add_subcommand("metrics", "Recompute summary.csv from an output directory");
    metrics->add_option("--in", in_dir, "Directory holding epochs.csv")->required()->check(CLI::ExistingDirectory);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitConfig;
    }

    if (*simulate)
    {
        hstpos::SimConfig cfg;
        try
        {
            cfg = hstpos::load_config(config_path);
            cfg.master_seed = seed;
            cfg.output_dir = out_dir;
            if (!mode.empty())
                cfg.mode = hstpos::parse_mode(mode);
            if (epochs)
                cfg.num_epochs = *epochs;
            if (track_length)
                cfg.deployment.track_length = *track_length;
            cfg.validate();
        }
        catch (const hstpos::ConfigError &e)
        {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        }

        try
        {
            const auto result = hstpos::run_simulation(cfg, workers);
            std::filesystem::create_directories(cfg.output_dir);
            hstpos::export_records(cfg.output_dir, result.epochs, result.measurements, result.summary);
            print_summary(result.summary);
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
        return kExitOk;
    }

    try
    {
        const std::filesystem::path dir = in_dir;
        const auto records = hstpos::read_epochs_csv(dir / "epochs.csv");
        std::vector<hstpos::MeasurementRecord> measurements;
        if (std::filesystem::exists(dir / "measurements.csv"))
            measurements = hstpos::read_measurements_csv(dir / "measurements.csv");
        const auto summary = hstpos::compute_metrics(records, measurements);
        hstpos::write_summary_csv(dir / "summary.csv", summary);
        print_summary(summary);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
