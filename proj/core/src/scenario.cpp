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


#include "iabsim/scenario.hpp"

#include <cmath>
#include <numbers>

namespace iabsim {

std::string_view to_string(NodeKind k)
{
    switch (k) {
    case NodeKind::Dgnb:
        return "Dgnb";
    case NodeKind::Iab:
        return "Iab";
    case NodeKind::Ue:
        return "Ue";
    }
    return "?";
}

double Position::norm() const { return std::hypot(x, y); }

namespace {

Position uniform_in_disc(Rng &rng, double radius)
{
    for (;;) {
        const double x = (2.0 * uniform01(rng) - 1.0) * radius;
        const double y = (2.0 * uniform01(rng) - 1.0) * radius;
        if (x * x + y * y <= radius * radius)
            return {x, y};
    }
}

} // namespace

Scenario generate_deployment(const Config &cfg, std::uint64_t seed)
{
    Scenario sc;
    sc.config = cfg;
    sc.config.seed = seed;

    const bool dgnb_multi = cfg.beam_config != BeamConfig::AllSingle;
    const bool iab_multi = cfg.beam_config == BeamConfig::AllMulti;

    Node dgnb;
    dgnb.id = 0;
    dgnb.kind = NodeKind::Dgnb;
    dgnb.position = {cfg.cell_radius, 0.0};
    dgnb.height = cfg.height_dgnb;
    dgnb.tx_power_dbm = cfg.tx_power_dgnb;
    dgnb.noise_figure_db = cfg.noise_figure_bs;
    dgnb.array = cfg.array_bs;
    dgnb.multi_beam = dgnb_multi;
    sc.nodes.push_back(dgnb);

    Rng iab_rng = make_stream(seed, Stream::IabPlacement);
    for (int i = 0; i < cfg.num_iab; ++i) {
        Node n;
        n.id = static_cast<NodeId>(sc.nodes.size());
        n.kind = NodeKind::Iab;
        n.position = uniform_in_disc(iab_rng, cfg.cell_radius);
        n.height = cfg.height_iab;
        n.tx_power_dbm = cfg.tx_power_iab;
        n.noise_figure_db = cfg.noise_figure_bs;
        n.array = cfg.array_bs;
        n.multi_beam = iab_multi;
        sc.nodes.push_back(n);
    }

    Rng ue_rng = make_stream(seed, Stream::UePlacement);
    Rng mob_rng = make_stream(seed, Stream::Mobility);
    sc.motion.assign(sc.nodes.size(), UeMotion{});
    for (int i = 0; i < cfg.num_ues; ++i) {
        Node n;
        n.id = static_cast<NodeId>(sc.nodes.size());
        n.kind = NodeKind::Ue;
        n.position = uniform_in_disc(ue_rng, cfg.cell_radius);
        n.height = cfg.height_ue;
        n.tx_power_dbm = cfg.tx_power_ue;
        n.noise_figure_db = cfg.noise_figure_ue;
        n.array = cfg.array_ue;
        sc.nodes.push_back(n);
        sc.motion.push_back({2.0 * std::numbers::pi * uniform01(mob_rng), cfg.ue_speed, cfg.direction_redraw_period});
    }
    return sc;
}

void move_with_reflection(Position &p, double &direction, double distance, double radius)
{
    double dx = std::cos(direction);
    double dy = std::sin(direction);
    double remaining = distance;
    // Each pass either finishes the move or consumes one boundary hit; a
    // chord of positive length always follows a reflection.
    for (int guard = 0; guard < 64 && remaining > 0.0; ++guard) {
        const double pd = p.x * dx + p.y * dy;
        const double c = p.x * p.x + p.y * p.y - radius * radius;
        const double disc = std::max(0.0, pd * pd - c);
        const double t_exit = std::max(0.0, -pd + std::sqrt(disc));
        if (remaining < t_exit) {
            p.x += remaining * dx;
            p.y += remaining * dy;
            remaining = 0.0;
            break;
        }
        p.x += t_exit * dx;
        p.y += t_exit * dy;
        remaining -= t_exit;
        const double r = std::hypot(p.x, p.y);
        const double nx = p.x / r;
        const double ny = p.y / r;
        const double dn = dx * nx + dy * ny;
        if (dn > 0.0) {
            dx -= 2.0 * dn * nx;
            dy -= 2.0 * dn * ny;
        }
        // Pin to the circle; the next chord starts from the boundary.
        p.x = nx * radius;
        p.y = ny * radius;
    }
    const double r = std::hypot(p.x, p.y);
    if (r > radius) {
        p.x *= radius / r;
        p.y *= radius / r;
    }
    direction = std::atan2(dy, dx);
}

void step_mobility(Scenario &scenario, double dt, double now, Rng &rng)
{
    const double radius = scenario.config.cell_radius;
    for (std::size_t i = static_cast<std::size_t>(scenario.first_ue()); i < scenario.nodes.size(); ++i) {
        auto &m = scenario.motion[i];
        if (now >= m.next_redraw) {
            m.direction = 2.0 * std::numbers::pi * uniform01(rng);
            m.next_redraw += scenario.config.direction_redraw_period;
        }
        move_with_reflection(scenario.nodes[i].position, m.direction, m.speed * dt, radius);
    }
}

} // namespace iabsim
