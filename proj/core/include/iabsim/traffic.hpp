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


#ifndef IABSIM_TRAFFIC_HPP
#define IABSIM_TRAFFIC_HPP

#include "iabsim/mac.hpp"
#include "iabsim/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace iabsim {

using Bytes = std::int64_t;

struct Holding {
    NodeId node = -1;
    Bytes bytes = 0;
};

// One FTP model 3 file transfer. Bytes live at the source until sent, then
// in relay buffers, then count as delivered at the destination:
// at_source + sum(buffered) + delivered == size at all times.
struct Session {
    std::int64_t id = 0;
    NodeId ue = -1;
    Direction direction = Direction::Dl;
    Bytes size = 0;
    Bytes at_source = 0;
    std::vector<Holding> buffered;
    Bytes delivered = 0;
    double arrival = 0.0;
    double completion = std::numeric_limits<double>::quiet_NaN();

    NodeId source() const { return direction == Direction::Dl ? 0 : ue; }
    NodeId destination() const { return direction == Direction::Dl ? ue : 0; }
    bool completed() const { return delivered == size; }
    Bytes available_at(NodeId node) const;
    Bytes in_flight() const; // buffered at relays
};

Session make_session(std::int64_t id, NodeId ue, Direction dir, Bytes size, double arrival);

// Moves up to `bytes` from `from` to `to` (never more than `from` holds).
// Reaching the destination counts as delivery; the session completes at
// `slot_end` when the last byte arrives. Returns the bytes moved. Throws
// std::invalid_argument for negative `bytes`.
Bytes serve_bytes(Session &s, NodeId from, NodeId to, Bytes bytes, double slot_end);

// Sends everything held at `node` back to the source (used when a relay
// drops off the session's path).
Bytes return_to_source(Session &s, NodeId node);

// Poisson arrivals through an exponential next-arrival timer.
struct ArrivalProcess {
    double rate = 0.0;
    double next = std::numeric_limits<double>::infinity();
    Rng rng;
};

ArrivalProcess make_arrival_process(double rate, Rng rng, double start = 0.0);

// Appends arrival times in [.., until) and advances the timer.
void generate_arrivals(ArrivalProcess &proc, double until, std::vector<double> &times);

// size * 8 / (completion - arrival), with the duration floored at one slot.
// NaN for pending sessions.
double session_throughput(const Session &s, double min_duration = FrameStructure::kSlotDuration);

struct SessionRecord {
    NodeId ue = -1;
    Direction direction = Direction::Dl;
    Bytes size = 0;
    Bytes delivered = 0;
    double arrival = 0.0;
    double completion = std::numeric_limits<double>::quiet_NaN();
    double throughput = std::numeric_limits<double>::quiet_NaN();

    bool completed() const { return delivered == size; }
};

SessionRecord to_record(const Session &s);

// ue,direction,arrival,completion,throughput
void write_session_csv_header(std::ostream &out);
void write_session_csv(std::ostream &out, const SessionRecord &r);

} // namespace iabsim

#endif
