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

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "iabsim/rng.hpp"
#include "iabsim/topology.hpp"
#include "oracles.hpp"

using namespace iabsim;

namespace {

using oracle::brute_force;
using oracle::BruteForce;
using oracle::Instance;
using oracle::make_instance;
using oracle::random_instance;
constexpr double kInf = std::numeric_limits<double>::infinity();

void expect_valid_tree(const Topology &t, const FeasibleLinkSet &links)
{
    for (NodeId v = 1; v < static_cast<NodeId>(t.size()); ++v) {
        const auto vi = static_cast<std::size_t>(v);
        if (!t.attached(v)) {
            EXPECT_EQ(t.parent[vi], -1);
            continue;
        }
        const NodeId p = t.parent[vi];
        ASSERT_GE(p, 0);
        EXPECT_EQ(t.depth[vi], t.depth[static_cast<std::size_t>(p)] + 1);
        EXPECT_NE(t.kinds[static_cast<std::size_t>(p)], NodeKind::Ue);
        ASSERT_TRUE(links.rsrp(p, v).has_value());
        EXPECT_EQ(*links.rsrp(p, v), t.parent_rsrp[vi]);
        const Route r = route_to_donor(t, v);
        EXPECT_EQ(r.nodes.front(), 0);
        EXPECT_EQ(r.nodes.back(), v);
        EXPECT_EQ(r.hops(), t.depth[vi]);
        // Independent recomputation of the bottleneck from link annotations.
        double b = kInf;
        for (std::size_t k = 1; k < r.nodes.size(); ++k)
            b = std::min(b, *links.rsrp(r.nodes[k - 1], r.nodes[k]));
        EXPECT_EQ(r.bottleneck_rsrp, b);
        EXPECT_EQ(t.bottleneck[vi], b);
    }
    for (NodeId v = 0; v < static_cast<NodeId>(t.size()); ++v)
        if (t.kinds[static_cast<std::size_t>(v)] == NodeKind::Ue)
            EXPECT_TRUE(t.children[static_cast<std::size_t>(v)].empty());
}

} // namespace

TEST(FeasibleLinks, ThresholdExtremes)
{
    Instance in = make_instance(2, 2);
    const auto n = static_cast<NodeId>(in.kinds.size());
    for (NodeId p = 0; p < n; ++p)
        for (NodeId c = 0; c < n; ++c)
            if (p != c)
                in.rsrp(p, c) = -70.0;
    const auto all = feasible_links(in.kinds, in.rsrp, -kInf);
    // Parents: donor + 2 IAB; children: the other non-donor nodes.
    EXPECT_EQ(all.links.size(), 3u * 4u - 2u);
    for (const auto &l : all.links) {
        EXPECT_NE(l.parent, l.child);
        EXPECT_NE(all.kinds[static_cast<std::size_t>(l.parent)], NodeKind::Ue);
        EXPECT_NE(all.kinds[static_cast<std::size_t>(l.child)], NodeKind::Dgnb);
    }
    try {
        (void)feasible_links(in.kinds, in.rsrp, kInf);
        FAIL();
    } catch (const DegenerateDeployment &e) {
        EXPECT_STREQ(e.what(), "degenerate deployment");
    }
}

TEST(FeasibleLinks, ThreeNodeEnumeration)
{
    Instance in = make_instance(1, 1);
    in.rsrp(0, 1) = -60;
    in.rsrp(0, 2) = -75;
    in.rsrp(1, 2) = -65;
    const auto links = feasible_links(in.kinds, in.rsrp, -80.0);
    EXPECT_EQ(links.links.size(), 3u);
    EXPECT_EQ(*links.rsrp(1, 2), -65.0);
    EXPECT_FALSE(links.rsrp(2, 1).has_value());
}

TEST(MinHops, PrefersDirectDonorLink)
{
    Instance in = make_instance(1, 1);
    in.rsrp(0, 1) = -50;
    in.rsrp(0, 2) = -79;
    in.rsrp(1, 2) = -55;
    const auto t = form_topology_min_hops(feasible_links(in.kinds, in.rsrp, -80.0));
    EXPECT_EQ(t.parent[2], 0);
    EXPECT_EQ(t.depth[2], 1);
}

TEST(MinHops, ChainDepth)
{
    Instance in = make_instance(1, 1);
    in.rsrp(0, 1) = -50;
    in.rsrp(1, 2) = -55;
    const auto t = form_topology_min_hops(feasible_links(in.kinds, in.rsrp, -80.0));
    EXPECT_EQ(t.depth[2], 2);
    EXPECT_EQ(route_to_donor(t, 2).nodes, (std::vector<NodeId>{0, 1, 2}));
}

TEST(MinHops, EqualDepthTieBrokenByRsrpThenId)
{
    Instance in = make_instance(2, 2);
    in.rsrp(0, 1) = -50;
    in.rsrp(0, 2) = -50;
    in.rsrp(1, 3) = -90;
    in.rsrp(2, 3) = -80;
    in.rsrp(1, 4) = -70;
    in.rsrp(2, 4) = -70;
    const auto t = form_topology_min_hops(feasible_links(in.kinds, in.rsrp, -100.0));
    EXPECT_EQ(t.parent[3], 2);
    EXPECT_EQ(t.parent[4], 1);
}

TEST(MaxRsrp, WidestPathBeatsDirectLink)
{
    Instance in = make_instance(1, 1);
    in.rsrp(0, 1) = -80;
    in.rsrp(1, 2) = -85;
    in.rsrp(0, 2) = -100;
    const auto t = form_topology_max_rsrp(feasible_links(in.kinds, in.rsrp, -120.0));
    EXPECT_EQ(t.parent[2], 1);
    EXPECT_EQ(route_to_donor(t, 2).bottleneck_rsrp, -85.0);
}

TEST(MaxRsrp, SharedBottleneckPrefersFewerHops)
{
    Instance in = make_instance(2, 1);
    in.rsrp(0, 1) = -90; // shared bottleneck
    in.rsrp(1, 2) = -60;
    in.rsrp(2, 3) = -60;
    in.rsrp(1, 3) = -70;
    const auto t = form_topology_max_rsrp(feasible_links(in.kinds, in.rsrp, -120.0));
    EXPECT_EQ(t.parent[3], 1);
    EXPECT_EQ(t.depth[3], 2);
}

TEST(Routes, DonorAndDetached)
{
    Instance in = make_instance(1, 2);
    in.rsrp(0, 1) = -50;
    in.rsrp(1, 2) = -60;
    const auto t = form_topology_max_rsrp(feasible_links(in.kinds, in.rsrp, -80.0));
    const Route r = route_to_donor(t, 0);
    EXPECT_EQ(r.nodes, std::vector<NodeId>{0});
    EXPECT_EQ(r.hops(), 0);
    EXPECT_EQ(route_to_donor(t, 2).nodes.size(), 3u);
    EXPECT_FALSE(t.attached(3));
    EXPECT_EQ(t.detached, std::vector<NodeId>{3});
    EXPECT_THROW((void)route_to_donor(t, 3), DetachedNode);
}

TEST(Routes, AncestorQueries)
{
    Instance in = make_instance(2, 1);
    in.rsrp(0, 1) = -50;
    in.rsrp(1, 2) = -50;
    in.rsrp(2, 3) = -50;
    const auto t = form_topology_min_hops(feasible_links(in.kinds, in.rsrp, -80.0));
    EXPECT_TRUE(t.is_ancestor_or_self(0, 3));
    EXPECT_TRUE(t.is_ancestor_or_self(2, 2));
    EXPECT_FALSE(t.is_ancestor_or_self(3, 1));
    EXPECT_EQ(t.next_hop_down(0, 3), 1);
    EXPECT_EQ(t.next_hop_down(1, 3), 2);
    EXPECT_EQ(t.next_hop_down(2, 3), 3);
    EXPECT_EQ(t.next_hop_down(3, 3), -1);
    EXPECT_EQ(t.next_hop_down(2, 1), -1);
    std::ostringstream csv;
    write_topology_csv(csv, t);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "node,parent,depth,bottleneck_rsrp");
}

TEST(TopologyOracle, RandomInstancesMatchBruteForce)
{
    Rng rng = make_stream(2024, Stream::Channel);
    const auto start = std::chrono::steady_clock::now();
    int checked = 0;
    for (int k = 0; k < 300; ++k) {
        const int iab = 1 + static_cast<int>(uniform01(rng) * 8); // up to 8 relays
        const int ues = 1 + static_cast<int>(uniform01(rng) * 4);
        Instance in = random_instance(rng, iab, ues, 0.2 + 0.6 * uniform01(rng));
        in.rsrp(0, 1) = -60.0; // donor never isolated
        const auto links = feasible_links(in.kinds, in.rsrp, -100.0);
        const BruteForce bf = brute_force(links);
        const auto wide = form_topology_max_rsrp(links);
        const auto bfs = form_topology_min_hops(links);
        expect_valid_tree(wide, links);
        expect_valid_tree(bfs, links);
        for (NodeId v = 1; v < static_cast<NodeId>(in.kinds.size()); ++v) {
            const auto vi = static_cast<std::size_t>(v);
            const bool reachable = bf.best_bottleneck[vi] > -kInf;
            ASSERT_EQ(wide.attached(v), reachable);
            ASSERT_EQ(bfs.attached(v), reachable);
            if (!reachable)
                continue;
            EXPECT_EQ(route_to_donor(wide, v).bottleneck_rsrp, bf.best_bottleneck[vi]) << "instance " << k;
            EXPECT_EQ(bfs.depth[vi], bf.min_hops[vi]) << "instance " << k;
        }
        ++checked;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_GE(checked, 100);
    EXPECT_LT(secs, 1.0);
}

TEST(TopologyOracle, WidestPathInvariantUnderMonotoneTransform)
{
    Rng rng = make_stream(77, Stream::Channel);
    for (int k = 0; k < 100; ++k) {
        Instance in = random_instance(rng, 6, 4, 0.6);
        in.rsrp(0, 1) = -60.0;
        Instance tr = in;
        const auto n = static_cast<NodeId>(in.kinds.size());
        for (NodeId p = 0; p < n; ++p)
            for (NodeId c = 0; c < n; ++c)
                if (std::isfinite(in.rsrp(p, c)))
                    tr.rsrp(p, c) = std::exp(in.rsrp(p, c) / 20.0); // strictly increasing
        const auto a = form_topology_max_rsrp(feasible_links(in.kinds, in.rsrp, -kInf));
        const auto b = form_topology_max_rsrp(feasible_links(tr.kinds, tr.rsrp, -kInf));
        EXPECT_EQ(a.parent, b.parent);
        EXPECT_EQ(a.depth, b.depth);
    }
}
