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


#ifndef IABSIM_MAC_HPP
#define IABSIM_MAC_HPP

#include "iabsim/topology.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace iabsim {

enum class Direction { Dl, Ul };

std::string_view to_string(Direction d);

// Numerology 3: 120 kHz subcarrier spacing, 0.125 ms slots, 14 symbols.
struct FrameStructure {
    static constexpr int kNumerology = 3;
    static constexpr double kSubcarrierSpacing = 120e3;
    static constexpr double kSlotDuration = 0.125e-3;
    static constexpr int kSymbolsPerSlot = 14;

    int guard_symbols = 1;
    int slots_per_frame = 80;

    int usable_symbols() const { return kSymbolsPerSlot - guard_symbols; }
    double guard_fraction() const { return static_cast<double>(guard_symbols) / kSymbolsPerSlot; }
};

// DL/UL symbol shares of one scheduling node. c_dl + c_ul = 1.
struct SlotFormat {
    double c_dl = 0.5;
    double c_ul = 0.5;

    // round-half-up of c_dl over the usable symbols; the rest goes to UL.
    int dl_symbols(int guard_symbols) const;
    int ul_symbols(int guard_symbols) const;
};

struct ActiveCounts {
    int dl = 0;
    int ul = 0;
};

SlotFormat slot_format_static();

// c_dl = dl / (dl + ul), 0.5 when both are zero, clamped to [lo, hi].
SlotFormat slot_format_pf(int active_dl, int active_ul, double lo = 0.1, double hi = 0.9);

// UL coefficient averaged between the node-local and the global PF
// fractions.
SlotFormat slot_format_wpf(ActiveCounts local, ActiveCounts global, double lo = 0.1, double hi = 0.9);

// A UE's buffered-traffic flags and the nodes currently serving it.
struct UeActivity {
    NodeId ue = -1;
    bool dl = false;
    bool ul = false;
    std::array<NodeId, 2> serving{-1, -1};
};

struct ActivityCounts {
    ActiveCounts global;
    std::vector<ActiveCounts> per_node; // UEs served within the node's subtree
};

ActivityCounts count_active(const Topology &topology, std::span<const UeActivity> ues);

// One scheduling node's children that have pending traffic this slot.
struct ChildDemand {
    NodeId child = -1;
    bool backhaul = false; // child is an IAB node
    bool dl = false;
    bool ul = false;
};

struct ParentDemand {
    NodeId parent = -1;
    SlotFormat format;
    bool multi_beam = false;
    std::vector<ChildDemand> children;
};

struct AllocationEntry {
    NodeId tx = -1;
    NodeId rx = -1;
    Direction direction = Direction::Dl;
    NodeId scheduler = -1; // node owning the beam
    int beam = 0;          // 0 = access/shared beam; k >= 1 = backhaul child beam
    double start_symbol = 0.0;
    double symbols = 0.0;

    double fraction() const { return symbols / FrameStructure::kSymbolsPerSlot; }
};

struct Allocation {
    long long slot = 0;
    std::vector<AllocationEntry> entries;
};

// Parents at even depth schedule in even slots, odd-depth parents in odd
// slots. Within a parent, DL symbols are split equally over children with
// pending DL, UL symbols over children with pending UL. Single-beam parents
// time-share one beam; multi-beam parents give every backhaul child its own
// beam and share one access beam among UEs.
Allocation schedule_slot(const Topology &topology, std::span<const ParentDemand> demands, long long slot_index,
                         const FrameStructure &frame);

// Number of simultaneous beams a node transmits with (power is split evenly).
int beams_active(const Topology &topology, NodeId node, bool multi_beam);

struct AllocationCheck {
    int half_duplex_violations = 0;
    int beam_overflows = 0;

    bool ok() const { return half_duplex_violations == 0 && beam_overflows == 0; }
};

// Symbol-level half-duplex check (no node transmits and receives in
// overlapping symbols; no node both schedules and is scheduled) and per-beam
// capacity check (fractions on one beam sum to at most 1 - guard fraction).
AllocationCheck verify_allocation(const Allocation &alloc, const FrameStructure &frame);

// slot,tx,rx,direction,scheduler,beam,fraction
void write_allocation_csv_header(std::ostream &out);
void write_allocation_csv(std::ostream &out, const Allocation &alloc);

} // namespace iabsim

#endif
