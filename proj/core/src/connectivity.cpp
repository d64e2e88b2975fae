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


#include "iabsim/connectivity.hpp"

#include <algorithm>
#include <ostream>

namespace iabsim {

CandidateOrder candidate_order(AssociationScheme scheme)
{
    return scheme == AssociationScheme::MinHops ? CandidateOrder::ByHops : CandidateOrder::ByRsrp;
}

bool ServingSet::is_active(NodeId n) const { return std::find(active.begin(), active.end(), n) != active.end(); }

const Candidate *ServingSet::find(NodeId n) const
{
    const auto it = std::find_if(candidates.begin(), candidates.end(), [n](const Candidate &c) { return c.node == n; });
    return it == candidates.end() ? nullptr : &*it;
}

bool candidate_before(const Candidate &a, const Candidate &b, CandidateOrder order)
{
    if (order == CandidateOrder::ByHops) {
        if (a.blocked != b.blocked)
            return !a.blocked;
        if (a.hops != b.hops)
            return a.hops < b.hops;
    }
    if (a.rsrp != b.rsrp)
        return a.rsrp > b.rsrp;
    return a.node < b.node;
}

std::vector<Candidate> build_candidates(std::vector<Candidate> feasible, CandidateOrder order)
{
    std::sort(feasible.begin(), feasible.end(),
              [order](const Candidate &a, const Candidate &b) { return candidate_before(a, b, order); });
    feasible.erase(std::unique(feasible.begin(), feasible.end(),
                               [](const Candidate &a, const Candidate &b) { return a.node == b.node; }),
                   feasible.end());
    return feasible;
}

std::vector<NodeId> select_serving(const ServingSet &set, int mc_degree)
{
    const std::size_t k = set.mode == ConnectivityMode::MC ? static_cast<std::size_t>(std::max(mc_degree, 1)) : 1;
    std::vector<NodeId> active;
    for (std::size_t i = 0; i < set.candidates.size() && i < k; ++i)
        active.push_back(set.candidates[i].node);
    return active;
}

std::string_view to_string(SwitchReason r) { return r == SwitchReason::Blockage ? "blockage" : "scan"; }

std::optional<SwitchEvent> on_blockage_change(ServingSet &set, const BlockedFn &blocked, CandidateOrder order,
                                              double now, NodeId ue)
{
    if (set.mode != ConnectivityMode::SC_FS && set.mode != ConnectivityMode::SC_FS_Scan)
        return std::nullopt;
    if (set.active.empty() || !blocked(set.active.front()))
        return std::nullopt;

    const Candidate *best = nullptr;
    for (const auto &c : set.candidates) {
        if (blocked(c.node))
            continue;
        Candidate probe = c;
        probe.blocked = false;
        if (best == nullptr || candidate_before(probe, *best, order))
            best = &c;
    }
    // Everything blocked: keep the degraded link rather than go to outage.
    if (best == nullptr || best->node == set.active.front())
        return std::nullopt;
    SwitchEvent ev{now, ue, set.active.front(), best->node, SwitchReason::Blockage};
    set.active = {best->node};
    return ev;
}

std::optional<SwitchEvent> periodic_scan(ServingSet &set, double now, double scan_period,
                                         std::vector<Candidate> fresh, CandidateOrder order, NodeId ue)
{
    if (set.mode != ConnectivityMode::SC_FS_Scan)
        return std::nullopt;
    if (now - set.last_scan < scan_period)
        return std::nullopt;
    set.last_scan = now;
    set.candidates = build_candidates(std::move(fresh), order);
    if (set.candidates.empty())
        return std::nullopt;
    const NodeId best = set.candidates.front().node;
    const NodeId current = set.active.empty() ? -1 : set.active.front();
    if (best == current)
        return std::nullopt;
    // A tie with the current link is not worth a switch.
    if (const Candidate *cur = set.find(current); cur != nullptr && cur->rsrp == set.candidates.front().rsrp &&
                                                  cur->hops == set.candidates.front().hops &&
                                                  cur->blocked == set.candidates.front().blocked)
        return std::nullopt;
    set.active = {best};
    return SwitchEvent{now, ue, current, best, SwitchReason::Scan};
}

void write_switch_csv_header(std::ostream &out) { out << "time,ue,from,to,reason\n"; }

void write_switch_csv(std::ostream &out, const SwitchEvent &e)
{
    out << format_double(e.time) << ',' << e.ue << ',' << e.from << ',' << e.to << ',' << to_string(e.reason) << '\n';
}

} // namespace iabsim
