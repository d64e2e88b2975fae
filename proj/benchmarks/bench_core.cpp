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


#include <benchmark/benchmark.h>

#include "iabsim/engine.hpp"
#include "iabsim/mac.hpp"
#include "iabsim/rng.hpp"
#include "iabsim/topology.hpp"

using namespace iabsim;

namespace {

struct Net {
    std::vector<NodeKind> kinds;
    RsrpMatrix rsrp;
};

Net random_net(int iab, int ues, std::uint64_t seed)
{
    Net n;
    n.kinds.push_back(NodeKind::Dgnb);
    n.kinds.insert(n.kinds.end(), static_cast<std::size_t>(iab), NodeKind::Iab);
    n.kinds.insert(n.kinds.end(), static_cast<std::size_t>(ues), NodeKind::Ue);
    n.rsrp = RsrpMatrix(n.kinds.size());
    Rng rng = make_stream(seed, Stream::Channel);
    for (NodeId p = 0; p <= iab; ++p)
        for (NodeId c = 1; c < static_cast<NodeId>(n.kinds.size()); ++c)
            if (c != p)
                n.rsrp(p, c) = -100.0 + 40.0 * uniform01(rng);
    return n;
}

void BM_FormTopologyMaxRsrp(benchmark::State &state)
{
    const Net n = random_net(static_cast<int>(state.range(0)), 60, 1);
    const auto links = feasible_links(n.kinds, n.rsrp, -80.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(form_topology_max_rsrp(links));
}
BENCHMARK(BM_FormTopologyMaxRsrp)->Arg(3)->Arg(7)->Arg(15);

void BM_FormTopologyMinHops(benchmark::State &state)
{
    const Net n = random_net(static_cast<int>(state.range(0)), 60, 1);
    const auto links = feasible_links(n.kinds, n.rsrp, -80.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(form_topology_min_hops(links));
}
BENCHMARK(BM_FormTopologyMinHops)->Arg(3)->Arg(7)->Arg(15);

// Every UE has DL and UL pending: the densest slot the scheduler sees.
void BM_ScheduleAndVerifySlot(benchmark::State &state)
{
    const Net n = random_net(7, 60, 2);
    const Topology t = form_topology_max_rsrp(feasible_links(n.kinds, n.rsrp, -80.0));
    std::vector<ParentDemand> demands;
    for (NodeId p = 0; p <= 7; ++p) {
        ParentDemand pd;
        pd.parent = p;
        pd.format = slot_format_pf(3, 1);
        pd.multi_beam = state.range(0) != 0;
        for (NodeId c : t.children[static_cast<std::size_t>(p)])
            pd.children.push_back({c, n.kinds[static_cast<std::size_t>(c)] == NodeKind::Iab, true, true});
        if (!pd.children.empty())
            demands.push_back(pd);
    }
    FrameStructure frame;
    long long slot = 0;
    for (auto _ : state) {
        const Allocation a = schedule_slot(t, demands, slot++, frame);
        benchmark::DoNotOptimize(verify_allocation(a, frame));
    }
}
BENCHMARK(BM_ScheduleAndVerifySlot)->Arg(0)->Arg(1);

// One simulated second of the reference deployment.
void BM_RunOneSecond(benchmark::State &state)
{
    Config c;
    c.sim_duration = 1.0;
    c.warmup = 0.0;
    c.blocker_density = 0.3;
    c.connectivity_mode = ConnectivityMode::SC_FS_Scan;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(c));
    state.SetItemsProcessed(state.iterations() * 8000);
}
BENCHMARK(BM_RunOneSecond)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
