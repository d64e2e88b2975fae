// SPDX-License-Identifier: Apache-2.0
//
// iabsim: slot-level simulator for mmWave integrated access and backhaul networks
// Copyright (C) 2026 The iabsim Authors
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


// iabsim command-line front end: run, sweep, plotdata.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "iabsim/config.hpp"
#include "iabsim/engine.hpp"
#include "iabsim/sweep.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
};

iabsim::Config load(const Common &c)
{
    iabsim::Config cfg;
    if (!c.config_path.empty())
        cfg = iabsim::load_config_file(c.config_path);
    for (const auto &o : c.overrides)
        iabsim::apply_override(cfg, o);
    return cfg;
}

// Opens `path` for writing, or returns stdout for "" and "-".
class Output {
public:
    explicit Output(const std::string &path)
    {
        if (path.empty() || path == "-")
            return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::unique_ptr<std::ofstream> open_log(const std::string &path)
{
    if (path.empty())
        return nullptr;
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return f;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"iabsim: slot-level simulator for mmWave integrated access and backhaul networks"};
    app.require_subcommand(1);

    Common run_opts;
    int run_seeds = 1;
    std::string trace_path, switch_path, session_path, topology_path;
    auto *run_cmd = app.add_subcommand("run", "Simulate one configuration and print its report as JSON");
    run_cmd->add_option("--config", run_opts.config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
    run_cmd->add_option("--set", run_opts.overrides, "Override a config field, key=value (repeatable)");
    run_cmd->add_option("--seeds", run_seeds, "Number of consecutive seeds starting at the configured seed")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run_opts.out, "Report file (default stdout)");
    run_cmd->add_option("--allocation-trace", trace_path, "Write the per-slot allocation trace CSV");
    run_cmd->add_option("--switch-log", switch_path, "Write the serving-node switch log CSV");
    run_cmd->add_option("--session-log", session_path, "Write the per-session record CSV");
    run_cmd->add_option("--topology-log", topology_path, "Write the initial topology CSV");

    Common sweep_opts;
    std::string sweep_name;
    std::optional<int> sweep_seeds;
    std::optional<std::uint64_t> first_seed;
    int workers = 1;
    bool quiet = false;
    auto *sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep (preset fig3/fig4/fig5 or a spec file)");
    sweep_cmd->add_option("spec", sweep_name, "Preset name or sweep spec file")->required();
    sweep_cmd->add_option("--config", sweep_opts.config_path, "Base config file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--set", sweep_opts.overrides, "Override a base config field, key=value (repeatable)");
    sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds per point")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--first-seed", first_seed, "First seed of each point");
    sweep_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep_opts.out, "Sweep CSV (default stdout)");
    sweep_cmd->add_flag("--quiet", quiet, "No progress on stderr");

    std::string plot_in, plot_out;
    auto *plot_cmd = app.add_subcommand("plotdata", "Convert a sweep CSV into tidy (series, x, y, y_stddev) data");
    plot_cmd->add_option("sweep_csv", plot_in, "Sweep CSV written by `iabsim sweep`")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--out", plot_out, "Tidy CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const iabsim::Config cfg = load(run_opts);
            const auto v = iabsim::validate_config(cfg);
            if (!v) {
                std::cerr << "invalid configuration:\n";
                for (const auto &e : v.errors())
                    std::cerr << "  " << e.field << ": " << e.message << '\n';
                return kExitValidation;
            }
            auto trace = open_log(trace_path);
            auto switches = open_log(switch_path);
            auto sessions = open_log(session_path);
            auto topology = open_log(topology_path);
            iabsim::RunOptions opts{trace.get(), switches.get(), sessions.get(), topology.get()};
            Output out(run_opts.out);
            if (run_seeds > 1)
                out.stream() << "[\n";
            for (int k = 0; k < run_seeds; ++k) {
                iabsim::Config c = v.config();
                c.seed += static_cast<std::uint64_t>(k);
                out.stream() << iabsim::report_to_json(iabsim::run(c, opts));
                out.stream() << (run_seeds > 1 && k + 1 < run_seeds ? ",\n" : "\n");
            }
            if (run_seeds > 1)
                out.stream() << "]\n";
            return 0;
        }

        if (*sweep_cmd) {
            iabsim::SweepSpec spec = iabsim::is_sweep_preset(sweep_name) ? iabsim::sweep_preset(sweep_name)
                                                                          : iabsim::load_sweep_spec(sweep_name);
            if (sweep_seeds)
                spec.seeds = *sweep_seeds;
            if (first_seed)
                spec.first_seed = *first_seed;
            iabsim::validate_sweep_spec(spec);
            const iabsim::Config base = load(sweep_opts);
            const auto points = iabsim::expand_sweep(spec, base);
            for (const auto &p : points) {
                if (!p.error.empty()) {
                    std::cerr << "invalid sweep point (" << p.series << ", " << spec.x_param << "=" << p.x
                              << "): " << p.error << '\n';
                    return kExitValidation;
                }
            }
            Output out(sweep_opts.out);
            iabsim::SweepProgress progress;
            if (!quiet)
                progress = [](std::size_t done, std::size_t total) {
                    std::fprintf(stderr, "\r%zu/%zu runs", done, total);
                    if (done == total)
                        std::fprintf(stderr, "\n");
                };
            const auto result = iabsim::run_sweep(spec, base, workers, progress);
            iabsim::write_sweep_csv(out.stream(), result);
            int failed = 0;
            for (const auto &r : result.rows)
                failed += r.type == iabsim::RowType::Seed && !r.ok ? 1 : 0;
            if (failed > 0)
                std::cerr << failed << " run(s) failed; see the error column\n";
            return 0;
        }

        if (*plot_cmd) {
            std::ifstream in(plot_in);
            std::vector<std::string> warnings;
            const auto points = iabsim::read_plot_points(in, warnings);
            for (const auto &w : warnings)
                std::cerr << "warning: " << w << '\n';
            Output out(plot_out);
            iabsim::write_plot_data(out.stream(), points);
            return 0;
        }
    } catch (const iabsim::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
