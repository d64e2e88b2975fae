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


#ifndef IABSIM_CONNECTIVITY_HPP
#define IABSIM_CONNECTIVITY_HPP

#include "iabsim/config.hpp"
#include "iabsim/scenario.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace iabsim {

// How serving-node candidates are ranked. ByRsrp: descending score, then
// lower id. ByHops: unblocked first, fewer hops to the donor, descending
// score, lower id.
enum class CandidateOrder { ByRsrp, ByHops };

CandidateOrder candidate_order(AssociationScheme scheme);

struct Candidate {
    NodeId node = -1;
    double rsrp = 0.0; // ranking score, dBm
    int hops = 0;      // route length from the donor to the UE through this node
    bool blocked = false;
};

struct ServingSet {
    ConnectivityMode mode = ConnectivityMode::SC;
    std::vector<Candidate> candidates; // best first
    std::vector<NodeId> active;        // 1 entry, or up to mc_degree in MC
    double last_scan = -std::numeric_limits<double>::infinity();
    bool outage = false;

    bool is_active(NodeId n) const;
    const Candidate *find(NodeId n) const;
};

bool candidate_before(const Candidate &a, const Candidate &b, CandidateOrder order);

// Sorts best-first. An empty result means the UE is in outage.
std::vector<Candidate> build_candidates(std::vector<Candidate> feasible, CandidateOrder order);

// SC modes: the best candidate. MC: the best `mc_degree` candidates.
std::vector<NodeId> select_serving(const ServingSet &set, int mc_degree);

enum class SwitchReason { Blockage, Scan };

std::string_view to_string(SwitchReason r);

struct SwitchEvent {
    double time = 0.0;
    NodeId ue = -1;
    NodeId from = -1;
    NodeId to = -1;
    SwitchReason reason = SwitchReason::Blockage;
};

using BlockedFn = std::function<bool(NodeId serving_node)>;

// Fast switching: in SC_FS and SC_FS_Scan, a blocked active link is replaced
// by the best unblocked candidate. No switch back on unblock. SC and MC do
// not react. Returns the switch, if one happened.
std::optional<SwitchEvent> on_blockage_change(ServingSet &set, const BlockedFn &blocked, CandidateOrder order,
                                              double now, NodeId ue);

// SC_FS_Scan only: every scan_period the candidates are re-ranked with
// blockage-aware scores and the best one becomes active.
std::optional<SwitchEvent> periodic_scan(ServingSet &set, double now, double scan_period,
                                         std::vector<Candidate> fresh, CandidateOrder order, NodeId ue);

// time,ue,from,to,reason
void write_switch_csv_header(std::ostream &out);
void write_switch_csv(std::ostream &out, const SwitchEvent &e);

} // namespace iabsim

#endif
