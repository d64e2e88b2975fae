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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "iabsim/engine.hpp"

using namespace iabsim;

namespace {

// One donor, one UE close enough that the spectral-efficiency cap binds in
// LOS and NLOS alike; DL-only light load.
Config micro_config()
{
    Config c;
    c.num_iab = 0;
    c.num_ues = 1;
    c.cell_radius = 100.0;
    c.session_rate_dl = 0.2;
    c.session_rate_ul = 0.0;
    c.slot_format_policy = SlotFormatPolicy::Static5050;
    c.blocker_density = 0.0;
    c.sim_duration = 200.0;
    c.warmup = 1.0;
    return c;
}

Config small_config()
{
    Config c;
    c.num_ues = 20;
    c.sim_duration = 20.0;
    c.warmup = 2.0;
    return c;
}

SessionRecord record(NodeId ue, Direction d, double arrival, double completion)
{
    SessionRecord r;
    r.ue = ue;
    r.direction = d;
    r.size = 2'000'000;
    r.delivered = r.size;
    r.arrival = arrival;
    r.completion = completion;
    r.throughput = 16e6 / (completion - arrival);
    return r;
}

} // namespace

TEST(CollectMetrics, SingleSessionMean)
{
    std::vector<SessionRecord> log{record(1, Direction::Dl, 20.0, 21.0)};
    MetricsReport r;
    collect_metrics(log, 10.0, 2, 1, r);
    EXPECT_DOUBLE_EQ(r.per_ue_mean[0], 16e6);
    EXPECT_DOUBLE_EQ(r.mean_ue_throughput, 16e6);
    EXPECT_EQ(r.ues_with_sessions, 1); // the idle UE is excluded from the mean
    EXPECT_TRUE(std::isnan(r.per_ue_mean[1]));
    EXPECT_FALSE(r.insufficient_data);
}

TEST(CollectMetrics, WarmupSessionsExcluded)
{
    std::vector<SessionRecord> log{record(1, Direction::Dl, 5.0, 5.1), record(1, Direction::Ul, 12.0, 13.0)};
    MetricsReport r;
    collect_metrics(log, 10.0, 1, 1, r);
    EXPECT_DOUBLE_EQ(r.mean_ue_throughput, 16e6);
    EXPECT_EQ(r.completed_ul, 1);
    EXPECT_EQ(r.completed_dl, 0);
}

TEST(CollectMetrics, NothingCompletedFlagsInsufficientData)
{
    SessionRecord pending = record(1, Direction::Dl, 20.0, 21.0);
    pending.delivered = 10;
    std::vector<SessionRecord> log{pending};
    MetricsReport r;
    collect_metrics(log, 10.0, 1, 1, r);
    EXPECT_TRUE(r.insufficient_data);
    EXPECT_EQ(r.pending_sessions, 1);
}

TEST(Engine, MicroScenarioMatchesPipeModel)
{
    const Config c = micro_config();
    const MetricsReport r = run(c);
    ASSERT_FALSE(r.insufficient_data);
    ASSERT_GE(r.completed_dl, 20);
    // Even-slot phase (1/2) times the static DL share (7 of 14 symbols).
    const double expected = 0.25 * c.bandwidth * c.se_cap;
    EXPECT_NEAR(r.mean_ue_throughput / expected, 1.0, 0.01);
    EXPECT_TRUE(r.conservation_ok);
}

TEST(Engine, DeterministicReport)
{
    const Config c = small_config();
    EXPECT_EQ(report_to_json(run(c)), report_to_json(run(c)));
    Config d = c;
    d.seed = 2;
    EXPECT_NE(report_to_json(run(c)), report_to_json(run(d)));
}

TEST(Engine, InvariantsOverShortRun)
{
    for (auto mode : {ConnectivityMode::SC, ConnectivityMode::MC, ConnectivityMode::SC_FS, ConnectivityMode::SC_FS_Scan}) {
        for (auto beams : {BeamConfig::AllSingle, BeamConfig::AllMulti}) {
            Config c = small_config();
            c.connectivity_mode = mode;
            c.beam_config = beams;
            c.slot_format_policy = SlotFormatPolicy::WPF;
            c.blocker_density = 0.3;
            const MetricsReport r = run(c);
            EXPECT_EQ(r.half_duplex_violations, 0);
            EXPECT_EQ(r.beam_overflows, 0);
            EXPECT_TRUE(r.conservation_ok);
            EXPECT_LE(r.served_bytes, r.offered_bytes);
            for (double v : r.per_ue_mean)
                if (!std::isnan(v))
                    EXPECT_LE(v, c.bandwidth * c.se_cap);
            if (mode == ConnectivityMode::SC || mode == ConnectivityMode::MC)
                EXPECT_EQ(r.switches_blockage + r.switches_scan, 0);
        }
    }
}

TEST(Engine, NoBlockersMeansNoBlockedLinksOrSwitches)
{
    Config c = small_config();
    c.connectivity_mode = ConnectivityMode::SC_FS;
    const MetricsReport r = run(c);
    EXPECT_EQ(r.blocked_link_fraction, 0.0);
    EXPECT_EQ(r.switches_blockage, 0);
    EXPECT_EQ(r.switches_scan, 0);
}

TEST(Engine, BlockageDoesNotHelpSingleConnectivity)
{
    Config c = small_config();
    c.sim_duration = 40.0;
    c.connectivity_mode = ConnectivityMode::SC;
    const double clear = run(c).mean_ue_throughput;
    c.blocker_density = 0.5;
    const double blocked = run(c).mean_ue_throughput;
    EXPECT_GE(clear, blocked);
}

TEST(Engine, LargerFilesDoNotSpeedUpSessionsBeyondQuantization)
{
    Config c = micro_config();
    const MetricsReport small = run(c);
    c.file_size *= 2;
    const MetricsReport large = run(c);
    // Per-session slot quantization wastes under one slot per phase; allow
    // exactly that much gain for the longer transfer.
    const double duration_small = 16e6 / small.mean_ue_throughput;
    const double slack = 2.0 * 0.125e-3 / duration_small;
    EXPECT_LE(large.mean_ue_throughput, small.mean_ue_throughput * (1.0 + slack));
}

TEST(Engine, InvalidConfigRejected)
{
    Config c;
    c.cell_radius = 0.0;
    EXPECT_THROW(run(c), RunError);
}

TEST(Engine, DebugLogsHaveHeaders)
{
    Config c = small_config();
    c.sim_duration = 3.0;
    c.warmup = 1.0;
    c.connectivity_mode = ConnectivityMode::SC_FS_Scan;
    c.blocker_density = 0.5;
    std::ostringstream trace, switches, sessions, topo;
    RunOptions o{&trace, &switches, &sessions, &topo};
    const MetricsReport r = run(c, o);
    EXPECT_EQ(trace.str().rfind("slot,tx,rx,direction,scheduler,beam,fraction\n", 0), 0u);
    EXPECT_EQ(switches.str().rfind("time,ue,from,to,reason\n", 0), 0u);
    EXPECT_EQ(sessions.str().rfind("ue,direction,arrival,completion,throughput\n", 0), 0u);
    EXPECT_EQ(topo.str().rfind("node,parent,depth,bottleneck_rsrp\n", 0), 0u);
    std::size_t lines = 0;
    for (char ch : switches.str())
        lines += ch == '\n' ? 1 : 0;
    EXPECT_EQ(static_cast<std::int64_t>(lines) - 1, r.switches_blockage + r.switches_scan);
}

TEST(Engine, ReportJsonCarriesConfigAndSeed)
{
    Config c = small_config();
    c.sim_duration = 2.0;
    c.warmup = 0.5;
    const std::string j = report_to_json(run(c));
    EXPECT_NE(j.find("\"seed\": 1"), std::string::npos);
    EXPECT_NE(j.find("\"num_ues\": \"20\""), std::string::npos);
    EXPECT_NE(j.find("\"warmup_excluded\": true"), std::string::npos);
}
