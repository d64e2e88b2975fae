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


#ifndef IABSIM_SCENARIO_HPP
#define IABSIM_SCENARIO_HPP

#include "iabsim/config.hpp"
#include "iabsim/rng.hpp"

#include <span>
#include <vector>

namespace iabsim {

enum class NodeKind { Dgnb, Iab, Ue };

std::string_view to_string(NodeKind k);

struct Position {
    double x = 0.0;
    double y = 0.0;

    double norm() const;
    bool operator==(const Position &) const = default;
};

using NodeId = int;

struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::Ue;
    Position position;
    double height = 0.0;
    double tx_power_dbm = 0.0;
    double noise_figure_db = 0.0;
    ArraySize array;
    bool multi_beam = false;

    bool is_base_station() const { return kind != NodeKind::Ue; }
};

struct UeMotion {
    double direction = 0.0; // radians
    double speed = 0.0;     // m/s
    double next_redraw = 0.0;
};

// Node ids equal their index in `nodes`: donor first, then IAB nodes, then
// UEs. `motion` is indexed like `nodes`; entries for static nodes have zero
// speed.
struct Scenario {
    Config config;
    std::vector<Node> nodes;
    std::vector<UeMotion> motion;

    std::size_t size() const { return nodes.size(); }
    NodeId donor() const { return 0; }
    NodeId first_iab() const { return 1; }
    NodeId first_ue() const { return 1 + config.num_iab; }
    int num_base_stations() const { return 1 + config.num_iab; }
    std::span<const Node> base_stations() const { return {nodes.data(), static_cast<std::size_t>(first_ue())}; }
    std::span<const Node> ues() const
    {
        return {nodes.data() + first_ue(), nodes.size() - static_cast<std::size_t>(first_ue())};
    }
};

// Donor on the cell boundary at angle 0; IAB nodes and UEs uniform in the
// disc. IAB and UE positions come from separate streams so UE drops do not
// depend on the IAB count.
Scenario generate_deployment(const Config &cfg, std::uint64_t seed);

// Random-direction mobility with specular reflection at the cell boundary.
// Directions are redrawn every `direction_redraw_period` seconds of
// simulated time; `now` is the time at the start of the step.
void step_mobility(Scenario &scenario, double dt, double now, Rng &rng);

// Moves one point by `distance` along `direction`, reflecting off the circle
// of `radius`. Updates both in place.
void move_with_reflection(Position &p, double &direction, double distance, double radius);

} // namespace iabsim

#endif
