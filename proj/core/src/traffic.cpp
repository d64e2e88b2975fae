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


#include "iabsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "iabsim/config.hpp"

namespace iabsim {

Bytes Session::available_at(NodeId node) const
{
    if (node == source())
        return at_source;
    for (const auto &h : buffered)
        if (h.node == node)
            return h.bytes;
    return 0;
}

Bytes Session::in_flight() const
{
    Bytes total = 0;
    for (const auto &h : buffered)
        total += h.bytes;
    return total;
}

Session make_session(std::int64_t id, NodeId ue, Direction dir, Bytes size, double arrival)
{
    Session s;
    s.id = id;
    s.ue = ue;
    s.direction = dir;
    s.size = size;
    s.at_source = size;
    s.arrival = arrival;
    return s;
}

namespace {

Bytes &slot_for(Session &s, NodeId node)
{
    if (node == s.source())
        return s.at_source;
    for (auto &h : s.buffered)
        if (h.node == node)
            return h.bytes;
    s.buffered.push_back({node, 0});
    return s.buffered.back().bytes;
}

void drop_empty(Session &s)
{
    s.buffered.erase(std::remove_if(s.buffered.begin(), s.buffered.end(), [](const Holding &h) { return h.bytes == 0; }),
                     s.buffered.end());
}

} // namespace

Bytes serve_bytes(Session &s, NodeId from, NodeId to, Bytes bytes, double slot_end)
{
    if (bytes < 0)
        throw std::invalid_argument("serve_bytes: negative byte count");
    if (from == s.destination() || from == to)
        return 0;
    const Bytes moved = std::min(bytes, s.available_at(from));
    if (moved == 0)
        return 0;
    slot_for(s, from) -= moved;
    if (to == s.destination()) {
        s.delivered += moved;
        if (s.completed())
            s.completion = slot_end;
    } else {
        slot_for(s, to) += moved;
    }
    drop_empty(s);
    return moved;
}

Bytes return_to_source(Session &s, NodeId node)
{
    if (node == s.source())
        return 0;
    for (auto &h : s.buffered) {
        if (h.node != node)
            continue;
        const Bytes b = h.bytes;
        h.bytes = 0;
        s.at_source += b;
        drop_empty(s);
        return b;
    }
    return 0;
}

ArrivalProcess make_arrival_process(double rate, Rng rng, double start)
{
    ArrivalProcess p;
    p.rate = rate;
    p.rng = std::move(rng);
    p.next = rate > 0.0 ? start + exponential(p.rng, 1.0 / rate) : std::numeric_limits<double>::infinity();
    return p;
}

void generate_arrivals(ArrivalProcess &proc, double until, std::vector<double> &times)
{
    while (proc.next < until) {
        times.push_back(proc.next);
        double gap = 0.0;
        while (gap <= 0.0)
            gap = exponential(proc.rng, 1.0 / proc.rate);
        proc.next += gap;
    }
}

double session_throughput(const Session &s, double min_duration)
{
    if (!s.completed())
        return std::numeric_limits<double>::quiet_NaN();
    const double duration = std::max(s.completion - s.arrival, min_duration);
    return static_cast<double>(s.size) * 8.0 / duration;
}

SessionRecord to_record(const Session &s)
{
    return {s.ue, s.direction, s.size, s.delivered, s.arrival, s.completion, session_throughput(s)};
}

void write_session_csv_header(std::ostream &out) { out << "ue,direction,arrival,completion,throughput\n"; }

void write_session_csv(std::ostream &out, const SessionRecord &r)
{
    out << r.ue << ',' << to_string(r.direction) << ',' << format_double(r.arrival) << ','
        << (r.completed() ? format_double(r.completion) : std::string("pending")) << ','
        << (r.completed() ? format_double(r.throughput) : std::string("")) << '\n';
}

} // namespace iabsim
