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


#ifndef IABSIM_ENGINE_HPP
#define IABSIM_ENGINE_HPP

#include "iabsim/config.hpp"
#include "iabsim/traffic.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iabsim {

// Optional debug sinks. Null pointers disable the corresponding output.
struct RunOptions {
    std::ostream *allocation_trace = nullptr; // per-slot allocations
    std::ostream *switch_log = nullptr;       // serving-node switches
    std::ostream *session_log = nullptr;      // one row per session
    std::ostream *topology_log = nullptr;     // tree at t = 0
};

struct MetricsReport {
    Config config;
    std::uint64_t seed = 0;

    // Mean of per-session throughputs (bit/s) over completed sessions that
    // arrived after warmup; NaN for UEs without any.
    std::vector<double> per_ue_mean;
    double mean_ue_throughput = 0.0; // mean over UEs with >= 1 session
    double mean_dl_session_throughput = 0.0;
    double mean_ul_session_throughput = 0.0;
    int ues_with_sessions = 0;
    bool insufficient_data = false;
    bool warmup_excluded = true;

    std::int64_t completed_sessions = 0;
    std::int64_t pending_sessions = 0;
    std::int64_t completed_dl = 0;
    std::int64_t completed_ul = 0;

    std::int64_t switches_blockage = 0;
    std::int64_t switches_scan = 0;
    double mean_relay_queue_bytes = 0.0;
    double mean_c_dl = 0.0;           // time mean over scheduling nodes
    double blocked_link_fraction = 0.0; // time mean over active UE links
    int max_attach_failures = 0;
    double mean_hops = 0.0; // time mean UE route length

    std::int64_t slots = 0;
    std::int64_t half_duplex_violations = 0;
    std::int64_t beam_overflows = 0;
    std::int64_t offered_bytes = 0;
    std::int64_t served_bytes = 0; // delivered at destinations
    bool conservation_ok = false;
};

// Throughput statistics from a session log; `first_ue` maps UE node ids to
// per_ue_mean indices.
void collect_metrics(std::span<const SessionRecord> log, double warmup, int num_ues, int first_ue,
                     MetricsReport &report);

class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One complete simulation. Deterministic in (cfg, cfg.seed). Throws
// RunError for invalid configurations and invariant violations,
// DegenerateDeployment when the donor has no feasible link.
MetricsReport run(const Config &cfg, const RunOptions &options = {});

std::string report_to_json(const MetricsReport &report);

} // namespace iabsim

#endif
