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


#include "iabsim/mac.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "iabsim/config.hpp"

namespace iabsim {

namespace {

constexpr double kEps = 1e-9;

double pf_dl_fraction(ActiveCounts c, double lo, double hi)
{
    const int total = c.dl + c.ul;
    if (total <= 0)
        return 0.5;
    return std::clamp(static_cast<double>(c.dl) / total, lo, hi);
}

void split_region(std::vector<AllocationEntry> &out, NodeId parent, std::span<const ChildDemand *const> children,
                  Direction dir, int beam, double region_start, int region_symbols)
{
    if (children.empty() || region_symbols <= 0)
        return;
    const double share = static_cast<double>(region_symbols) / static_cast<double>(children.size());
    double start = region_start;
    for (const ChildDemand *c : children) {
        AllocationEntry e;
        e.direction = dir;
        e.tx = dir == Direction::Dl ? parent : c->child;
        e.rx = dir == Direction::Dl ? c->child : parent;
        e.scheduler = parent;
        e.beam = beam;
        e.start_symbol = start;
        e.symbols = share;
        out.push_back(e);
        start += share;
    }
}

} // namespace

std::string_view to_string(Direction d) { return d == Direction::Dl ? "DL" : "UL"; }

int SlotFormat::dl_symbols(int guard_symbols) const
{
    const int usable = FrameStructure::kSymbolsPerSlot - guard_symbols;
    const int dl = static_cast<int>(std::floor(c_dl * usable + 0.5));
    return std::clamp(dl, 0, usable);
}

int SlotFormat::ul_symbols(int guard_symbols) const
{
    return FrameStructure::kSymbolsPerSlot - guard_symbols - dl_symbols(guard_symbols);
}

SlotFormat slot_format_static() { return {0.5, 0.5}; }

SlotFormat slot_format_pf(int active_dl, int active_ul, double lo, double hi)
{
    const double c_dl = pf_dl_fraction({std::max(active_dl, 0), std::max(active_ul, 0)}, lo, hi);
    return {c_dl, 1.0 - c_dl};
}

SlotFormat slot_format_wpf(ActiveCounts local, ActiveCounts global, double lo, double hi)
{
    const double ul_local = 1.0 - pf_dl_fraction(local, lo, hi);
    const double ul_global = 1.0 - pf_dl_fraction(global, lo, hi);
    const double c_ul = 0.5 * (ul_local + ul_global);
    return {1.0 - c_ul, c_ul};
}

ActivityCounts count_active(const Topology &topology, std::span<const UeActivity> ues)
{
    ActivityCounts out;
    out.per_node.assign(topology.size(), {});
    std::vector<int> mark(topology.size(), -1);
    int stamp = 0;
    for (const auto &u : ues) {
        if (!u.dl && !u.ul)
            continue;
        out.global.dl += u.dl ? 1 : 0;
        out.global.ul += u.ul ? 1 : 0;
        ++stamp;
        for (NodeId s : u.serving) {
            for (NodeId v = s; v >= 0 && topology.attached(v); v = topology.parent[static_cast<std::size_t>(v)]) {
                auto &m = mark[static_cast<std::size_t>(v)];
                if (m == stamp)
                    break;
                m = stamp;
                out.per_node[static_cast<std::size_t>(v)].dl += u.dl ? 1 : 0;
                out.per_node[static_cast<std::size_t>(v)].ul += u.ul ? 1 : 0;
            }
        }
    }
    return out;
}

int beams_active(const Topology &topology, NodeId node, bool multi_beam)
{
    if (!multi_beam)
        return 1;
    int backhaul = 0;
    for (NodeId c : topology.children[static_cast<std::size_t>(node)])
        backhaul += topology.kinds[static_cast<std::size_t>(c)] == NodeKind::Iab ? 1 : 0;
    return backhaul + 1;
}

Allocation schedule_slot(const Topology &topology, std::span<const ParentDemand> demands, long long slot_index,
                         const FrameStructure &frame)
{
    Allocation alloc;
    alloc.slot = slot_index;
    const int parity = static_cast<int>(slot_index & 1);
    std::vector<const ChildDemand *> dl;
    std::vector<const ChildDemand *> ul;

    // A UE served by two same-parity parents (multi-connectivity) must not
    // transmit to one while receiving from the other; the first parent wins.
    const auto conflicts = [&alloc](const ChildDemand &c, Direction dir, double start, double len) {
        if (c.backhaul || len <= 0.0)
            return false;
        for (const auto &e : alloc.entries) {
            const bool opposite = dir == Direction::Dl ? e.tx == c.child : e.rx == c.child;
            if (opposite && e.start_symbol < start + len - kEps && start < e.start_symbol + e.symbols - kEps)
                return true;
        }
        return false;
    };

    for (const auto &pd : demands) {
        if (pd.parent < 0 || !topology.attached(pd.parent))
            continue;
        if ((topology.depth[static_cast<std::size_t>(pd.parent)] & 1) != parity)
            continue;
        const int dl_symbols = pd.format.dl_symbols(frame.guard_symbols);
        const int ul_symbols = pd.format.ul_symbols(frame.guard_symbols);
        const double ul_start = dl_symbols + frame.guard_symbols;

        if (!pd.multi_beam) {
            dl.clear();
            ul.clear();
            for (const auto &c : pd.children) {
                if (c.dl && !conflicts(c, Direction::Dl, 0.0, dl_symbols))
                    dl.push_back(&c);
                if (c.ul && !conflicts(c, Direction::Ul, ul_start, ul_symbols))
                    ul.push_back(&c);
            }
            split_region(alloc.entries, pd.parent, dl, Direction::Dl, 0, 0.0, dl_symbols);
            split_region(alloc.entries, pd.parent, ul, Direction::Ul, 0, ul_start, ul_symbols);
            continue;
        }

        // Access beam shared by UEs, one dedicated beam per backhaul child.
        dl.clear();
        ul.clear();
        for (const auto &c : pd.children) {
            if (c.backhaul)
                continue;
            if (c.dl && !conflicts(c, Direction::Dl, 0.0, dl_symbols))
                dl.push_back(&c);
            if (c.ul && !conflicts(c, Direction::Ul, ul_start, ul_symbols))
                ul.push_back(&c);
        }
        split_region(alloc.entries, pd.parent, dl, Direction::Dl, 0, 0.0, dl_symbols);
        split_region(alloc.entries, pd.parent, ul, Direction::Ul, 0, ul_start, ul_symbols);
        int beam = 0;
        for (const auto &c : pd.children) {
            if (!c.backhaul)
                continue;
            ++beam;
            const ChildDemand *one[] = {&c};
            if (c.dl)
                split_region(alloc.entries, pd.parent, one, Direction::Dl, beam, 0.0, dl_symbols);
            if (c.ul)
                split_region(alloc.entries, pd.parent, one, Direction::Ul, beam, ul_start, ul_symbols);
        }
    }
    return alloc;
}

AllocationCheck verify_allocation(const Allocation &alloc, const FrameStructure &frame)
{
    AllocationCheck check;
    const auto &es = alloc.entries;
    const auto served = [](const AllocationEntry &e) { return e.scheduler == e.tx ? e.rx : e.tx; };

    // Bucket the entries by node, then sweep each node's intervals in start
    // order; only pairs that actually overlap are visited.
    struct Span {
        double start;
        double end;
        bool tx;
    };
    NodeId max_node = -1;
    for (const auto &e : es)
        max_node = std::max({max_node, e.tx, e.rx, e.scheduler});
    const auto n = static_cast<std::size_t>(max_node + 1);
    std::vector<std::vector<Span>> spans(n);
    std::vector<int> schedules(n, 0);
    std::vector<int> scheduled(n, 0);
    for (const auto &e : es) {
        spans[static_cast<std::size_t>(e.tx)].push_back({e.start_symbol, e.start_symbol + e.symbols, true});
        spans[static_cast<std::size_t>(e.rx)].push_back({e.start_symbol, e.start_symbol + e.symbols, false});
        ++schedules[static_cast<std::size_t>(e.scheduler)];
        ++scheduled[static_cast<std::size_t>(served(e))];
    }
    std::array<std::vector<const Span *>, 2> open;
    for (std::size_t v = 0; v < n; ++v) {
        // a node may not both own a beam and be served by another scheduler
        check.half_duplex_violations += schedules[v] * scheduled[v];
        auto &list = spans[v];
        if (list.size() < 2)
            continue;
        std::sort(list.begin(), list.end(), [](const Span &a, const Span &b) { return a.start < b.start; });
        open[0].clear();
        open[1].clear();
        for (const auto &x : list) {
            for (auto &o : open)
                std::erase_if(o, [&](const Span *y) { return y->end - kEps <= x.start; });
            for (const Span *y : open[x.tx ? 0 : 1])
                if (y->start < x.end - kEps)
                    ++check.half_duplex_violations;
            open[x.tx ? 1 : 0].push_back(&x);
        }
    }
    std::vector<std::pair<std::pair<NodeId, int>, double>> beam_load;
    for (const auto &e : es) {
        const std::pair<NodeId, int> key{e.scheduler, e.beam};
        auto it = std::find_if(beam_load.begin(), beam_load.end(), [&](const auto &x) { return x.first == key; });
        if (it == beam_load.end())
            beam_load.push_back({key, e.fraction()});
        else
            it->second += e.fraction();
    }
    for (const auto &[beam, load] : beam_load)
        if (load > 1.0 - frame.guard_fraction() + kEps)
            ++check.beam_overflows;
    return check;
}

void write_allocation_csv_header(std::ostream &out) { out << "slot,tx,rx,direction,scheduler,beam,fraction\n"; }

void write_allocation_csv(std::ostream &out, const Allocation &alloc)
{
    for (const auto &e : alloc.entries)
        out << alloc.slot << ',' << e.tx << ',' << e.rx << ',' << to_string(e.direction) << ',' << e.scheduler << ','
            << e.beam << ',' << format_double(e.fraction()) << '\n';
}

} // namespace iabsim
