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


#include "iabsim/topology.hpp"

#include <algorithm>
#include <ostream>

#include "iabsim/config.hpp"

namespace iabsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool admissible(NodeKind parent, NodeKind child)
{
    if (parent == NodeKind::Ue || child == NodeKind::Dgnb)
        return false;
    return true;
}

Topology empty_topology(const FeasibleLinkSet &links)
{
    const std::size_t n = links.kinds.size();
    Topology t;
    t.kinds = links.kinds;
    t.parent.assign(n, -1);
    t.depth.assign(n, -1);
    t.children.assign(n, {});
    t.parent_rsrp.assign(n, kInf);
    t.bottleneck.assign(n, -kInf);
    t.depth[0] = 0;
    t.bottleneck[0] = kInf;
    return t;
}

void finish(Topology &t)
{
    for (std::size_t v = 1; v < t.size(); ++v) {
        if (t.parent[v] >= 0)
            t.children[static_cast<std::size_t>(t.parent[v])].push_back(static_cast<NodeId>(v));
        else
            t.detached.push_back(static_cast<NodeId>(v));
    }
    for (auto &c : t.children)
        std::sort(c.begin(), c.end());
}

} // namespace

std::optional<double> FeasibleLinkSet::rsrp(NodeId parent, NodeId child) const
{
    for (auto idx : from[static_cast<std::size_t>(parent)])
        if (links[idx].child == child)
            return links[idx].rsrp;
    return std::nullopt;
}

FeasibleLinkSet feasible_links(std::span<const NodeKind> kinds, const RsrpMatrix &rsrp, double threshold)
{
    FeasibleLinkSet set;
    set.kinds.assign(kinds.begin(), kinds.end());
    const std::size_t n = kinds.size();
    set.into.assign(n, {});
    set.from.assign(n, {});
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < n; ++c) {
            if (p == c || !admissible(kinds[p], kinds[c]))
                continue;
            const double v = rsrp(static_cast<NodeId>(p), static_cast<NodeId>(c));
            if (!(v >= threshold))
                continue;
            set.into[c].push_back(set.links.size());
            set.from[p].push_back(set.links.size());
            set.links.push_back({static_cast<NodeId>(p), static_cast<NodeId>(c), v});
        }
    }
    if (n == 0 || set.from[0].empty())
        throw DegenerateDeployment();
    return set;
}

FeasibleLinkSet feasible_links(const Scenario &scenario, const RsrpMatrix &rsrp)
{
    std::vector<NodeKind> kinds;
    kinds.reserve(scenario.nodes.size());
    for (const auto &n : scenario.nodes)
        kinds.push_back(n.kind);
    return feasible_links(kinds, rsrp, scenario.config.rsrp_threshold);
}

Topology form_topology_min_hops(const FeasibleLinkSet &links)
{
    Topology t = empty_topology(links);
    std::vector<NodeId> frontier{0};
    for (int d = 0; !frontier.empty(); ++d) {
        // Best parent on the current frontier for every still-detached node.
        std::vector<NodeId> best_parent(t.size(), -1);
        std::vector<double> best_rsrp(t.size(), -kInf);
        for (NodeId u : frontier) {
            for (auto idx : links.from[static_cast<std::size_t>(u)]) {
                const auto &l = links.links[idx];
                const auto c = static_cast<std::size_t>(l.child);
                if (t.depth[c] >= 0)
                    continue;
                if (best_parent[c] < 0 || l.rsrp > best_rsrp[c] || (l.rsrp == best_rsrp[c] && u < best_parent[c])) {
                    best_parent[c] = u;
                    best_rsrp[c] = l.rsrp;
                }
            }
        }
        std::vector<NodeId> next;
        for (std::size_t c = 0; c < t.size(); ++c) {
            if (best_parent[c] < 0)
                continue;
            const auto p = static_cast<std::size_t>(best_parent[c]);
            t.parent[c] = best_parent[c];
            t.depth[c] = d + 1;
            t.parent_rsrp[c] = best_rsrp[c];
            t.bottleneck[c] = std::min(t.bottleneck[p], best_rsrp[c]);
            if (t.kinds[c] != NodeKind::Ue)
                next.push_back(static_cast<NodeId>(c));
        }
        frontier = std::move(next);
    }
    finish(t);
    return t;
}

Topology form_topology_max_rsrp(const FeasibleLinkSet &links)
{
    Topology t = empty_topology(links);
    const std::size_t n = t.size();
    std::vector<int> hops(n, std::numeric_limits<int>::max());
    std::vector<bool> done(n, false);
    hops[0] = 0;

    for (;;) {
        // Widest, then shortest, then lowest id. O(n^2) is fine at cell scale.
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v] || t.bottleneck[v] == -kInf)
                continue;
            if (u == n || t.bottleneck[v] > t.bottleneck[u] ||
                (t.bottleneck[v] == t.bottleneck[u] && hops[v] < hops[u]))
                u = v;
        }
        if (u == n)
            break;
        done[u] = true;
        t.depth[u] = hops[u];
        if (t.kinds[u] == NodeKind::Ue)
            continue;
        for (auto idx : links.from[u]) {
            const auto &l = links.links[idx];
            const auto c = static_cast<std::size_t>(l.child);
            if (done[c])
                continue;
            const double bw = std::min(t.bottleneck[u], l.rsrp);
            const int h = hops[u] + 1;
            const bool better = bw > t.bottleneck[c] || (bw == t.bottleneck[c] && h < hops[c]) ||
                                (bw == t.bottleneck[c] && h == hops[c] && static_cast<NodeId>(u) < t.parent[c]);
            if (better) {
                t.bottleneck[c] = bw;
                hops[c] = h;
                t.parent[c] = static_cast<NodeId>(u);
                t.parent_rsrp[c] = l.rsrp;
            }
        }
    }
    finish(t);
    return t;
}

bool Topology::is_ancestor_or_self(NodeId ancestor, NodeId n) const
{
    if (n < 0 || !attached(n) || !attached(ancestor))
        return false;
    const int target_depth = depth[static_cast<std::size_t>(ancestor)];
    while (n >= 0 && depth[static_cast<std::size_t>(n)] > target_depth)
        n = parent[static_cast<std::size_t>(n)];
    return n == ancestor;
}

NodeId Topology::next_hop_down(NodeId ancestor, NodeId n) const
{
    if (n < 0 || !attached(n) || !attached(ancestor) || n == ancestor)
        return -1;
    const int target_depth = depth[static_cast<std::size_t>(ancestor)] + 1;
    if (depth[static_cast<std::size_t>(n)] < target_depth)
        return -1;
    while (depth[static_cast<std::size_t>(n)] > target_depth)
        n = parent[static_cast<std::size_t>(n)];
    return parent[static_cast<std::size_t>(n)] == ancestor ? n : -1;
}

Route route_to_donor(const Topology &topology, NodeId node)
{
    if (node < 0 || static_cast<std::size_t>(node) >= topology.size() || !topology.attached(node))
        throw DetachedNode("node " + std::to_string(node) + " is not attached to the donor");
    Route r;
    NodeId v = node;
    for (std::size_t steps = 0; v >= 0; ++steps) {
        if (steps > topology.size())
            throw std::logic_error("cycle in parent map");
        r.nodes.push_back(v);
        if (v != 0)
            r.bottleneck_rsrp = std::min(r.bottleneck_rsrp, topology.parent_rsrp[static_cast<std::size_t>(v)]);
        v = topology.parent[static_cast<std::size_t>(v)];
    }
    std::reverse(r.nodes.begin(), r.nodes.end());
    return r;
}

void write_topology_csv(std::ostream &out, const Topology &topology)
{
    out << "node,parent,depth,bottleneck_rsrp\n";
    for (std::size_t v = 0; v < topology.size(); ++v) {
        out << v << ',' << topology.parent[v] << ',' << topology.depth[v] << ','
            << format_double(topology.bottleneck[v]) << '\n';
    }
}

} // namespace iabsim
