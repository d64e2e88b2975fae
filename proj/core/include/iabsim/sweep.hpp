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


#ifndef IABSIM_SWEEP_HPP
#define IABSIM_SWEEP_HPP

#include "iabsim/config.hpp"
#include "iabsim/engine.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iabsim {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

// x_param is swept over x_values; every combination of the vary axes forms
// one series; base overrides apply to all points.
struct SweepSpec {
    std::string name = "sweep";
    std::string x_param;
    std::vector<std::string> x_values;
    std::vector<SweepAxis> vary;
    std::vector<std::pair<std::string, std::string>> base;
    int seeds = 5;
    std::uint64_t first_seed = 1;
};

const std::vector<std::string> &sweep_preset_names();
bool is_sweep_preset(std::string_view name);
SweepSpec sweep_preset(std::string_view name);

// Text form, one `key = value` per line, lists comma-separated:
//   name = mysweep
//   param = blocker_density
//   values = 0.1, 0.3
//   vary.connectivity_mode = SC, MC
//   set.session_rate_dl = 0.5
//   seeds = 3
SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::string &path);

// Throws ConfigError if a key is not a Config field, a list is empty or
// seeds < 1.
void validate_sweep_spec(const SweepSpec &spec);

struct SweepPoint {
    std::size_t run_id = 0;
    std::string series; // "k=v;k=v" over the vary axes, "all" if none
    std::string x;
    std::uint64_t seed = 0;
    Config config;
    std::string error; // set when the point's config is invalid
};

// Ordered by (series, x, seed), the order rows appear in the output.
std::vector<SweepPoint> expand_sweep(const SweepSpec &spec, const Config &base);

enum class RowType { Seed, Mean };

struct SweepRow {
    RowType type = RowType::Seed;
    std::size_t run_id = 0;
    std::string series;
    std::string x;
    std::uint64_t seed = 0;
    int n_seeds = 1;
    bool ok = false;
    std::string error;
    double mean_ue_throughput = 0.0;
    double mean_ue_throughput_std = 0.0;
    double mean_dl_session_throughput = 0.0;
    double mean_ul_session_throughput = 0.0;
    double completed_sessions = 0.0;
    double pending_sessions = 0.0;
    double switches_blockage = 0.0;
    double switches_scan = 0.0;
    double mean_relay_queue_bytes = 0.0;
    double mean_c_dl = 0.0;
    double mean_hops = 0.0;
    double blocked_link_fraction = 0.0;
    std::int64_t half_duplex_violations = 0;
    bool conservation_ok = true;
    Config config;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows; // per-seed rows of a point, then its mean row
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

// Runs every point on `workers` threads. A failing point is recorded in its
// row and the sweep continues. Output is independent of the worker count.
SweepResult run_sweep(const SweepSpec &spec, const Config &base, int workers = 1,
                      const SweepProgress &progress = {});

// Seed-mean row of a group of per-seed rows (sample standard deviation).
SweepRow aggregate_rows(const std::vector<SweepRow> &seed_rows);

void write_sweep_csv(std::ostream &out, const SweepResult &result);

struct PlotPoint {
    std::string series;
    double x = 0.0;
    double y = 0.0;
    double y_stddev = 0.0;
};

// Reads a sweep CSV and keeps the seed-mean rows as tidy (series, x, y,
// y_stddev). Warnings describe empty input and series missing x values.
std::vector<PlotPoint> read_plot_points(std::istream &sweep_csv, std::vector<std::string> &warnings);
void write_plot_data(std::ostream &out, const std::vector<PlotPoint> &points);

} // namespace iabsim

#endif
