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


#ifndef IABSIM_TOPOLOGY_HPP
#define IABSIM_TOPOLOGY_HPP

#include "iabsim/scenario.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace iabsim {

// Dense tx -> rx received-power table, dBm. Missing entries hold -inf.
class RsrpMatrix {
public:
    RsrpMatrix() = default;
    explicit RsrpMatrix(std::size_t n)
        : n_(n), values_(n * n, -std::numeric_limits<double>::infinity())
    {
    }

    std::size_t size() const { return n_; }
    double operator()(NodeId tx, NodeId rx) const { return values_[index(tx, rx)]; }
    double &operator()(NodeId tx, NodeId rx) { return values_[index(tx, rx)]; }

private:
    std::size_t index(NodeId tx, NodeId rx) const
    {
        return static_cast<std::size_t>(tx) * n_ + static_cast<std::size_t>(rx);
    }

    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct FeasibleLink {
    NodeId parent = 0;
    NodeId child = 0;
    double rsrp = 0.0; // downstream direction, parent -> child
};

// Directed candidate tree edges. IAB-IAB pairs appear once per direction.
struct FeasibleLinkSet {
    std::vector<NodeKind> kinds;
    std::vector<FeasibleLink> links;
    std::vector<std::vector<std::size_t>> into; // link indices by child
    std::vector<std::vector<std::size_t>> from; // link indices by parent

    std::optional<double> rsrp(NodeId parent, NodeId child) const;
};

class DegenerateDeployment : public std::runtime_error {
public:
    DegenerateDeployment() : std::runtime_error("degenerate deployment") {}
};

// Node 0 must be the donor. Throws DegenerateDeployment if the donor has no
// feasible link at all.
FeasibleLinkSet feasible_links(std::span<const NodeKind> kinds, const RsrpMatrix &rsrp, double threshold);
FeasibleLinkSet feasible_links(const Scenario &scenario, const RsrpMatrix &rsrp);

// Parent-pointer tree rooted at the donor (node 0). Detached nodes have
// parent -1 and depth -1.
struct Topology {
    std::vector<NodeKind> kinds;
    std::vector<NodeId> parent;
    std::vector<int> depth;
    std::vector<std::vector<NodeId>> children;
    std::vector<double> parent_rsrp; // rsrp of the link parent -> node
    std::vector<double> bottleneck;  // min link rsrp on the route; +inf at the donor
    std::vector<NodeId> detached;

    std::size_t size() const { return parent.size(); }
    bool attached(NodeId n) const { return depth[static_cast<std::size_t>(n)] >= 0; }
    bool is_ancestor_or_self(NodeId ancestor, NodeId n) const;
    // Child of `ancestor` on the path towards `n`; -1 if not a descendant.
    NodeId next_hop_down(NodeId ancestor, NodeId n) const;
};

Topology form_topology_min_hops(const FeasibleLinkSet &links);
Topology form_topology_max_rsrp(const FeasibleLinkSet &links);

struct Route {
    std::vector<NodeId> nodes; // donor first
    double bottleneck_rsrp = std::numeric_limits<double>::infinity();

    int hops() const { return static_cast<int>(nodes.size()) - 1; }
};

class DetachedNode : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Route route_to_donor(const Topology &topology, NodeId node);

// node,parent,depth,bottleneck_rsrp
void write_topology_csv(std::ostream &out, const Topology &topology);

} // namespace iabsim

#endif
