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


#include "iabsim/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iabsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double draw_sojourn(BlockageState state, const BlockageProcess &proc, Rng &rng)
{
    if ((state == BlockageState::Blocked && proc.p_stationary >= 1.0) ||
        (state == BlockageState::Unblocked && proc.p_stationary <= 0.0))
        return kInf;
    const double mean = state == BlockageState::Blocked ? proc.mean_blocked : proc.mean_unblocked;
    if (!std::isfinite(mean))
        return kInf;
    // Zero-length sojourns are not allowed; u < 1 keeps the draw positive.
    double s = 0.0;
    while (s <= 0.0)
        s = exponential(rng, mean);
    return s;
}

} // namespace

double stationary_blockage_probability(double d2d, double h_tx, double h_rx, const Config &cfg)
{
    if (h_tx <= h_rx)
        throw std::invalid_argument("transmitter must be above receiver for blockage zone");
    if (cfg.blocker_density <= 0.0)
        return 0.0;
    const double r = cfg.blocker_radius;
    const double zone = std::max(d2d * (cfg.height_blocker - h_rx) / (h_tx - h_rx) + r, r);
    return 1.0 - std::exp(-2.0 * cfg.blocker_density * r * zone);
}

double mean_blocked_duration(const Config &cfg)
{
    if (cfg.ue_speed <= 0.0)
        return kInf;
    return 2.0 * cfg.blocker_radius / cfg.ue_speed;
}

double mean_unblocked_duration(double p, double mean_blocked)
{
    if (p <= 0.0)
        return kInf;
    if (p >= 1.0)
        return 0.0;
    return mean_blocked * (1.0 - p) / p;
}

BlockageState sample_initial_state(double p, Rng &rng)
{
    if (p <= 0.0)
        return BlockageState::Unblocked;
    if (p >= 1.0)
        return BlockageState::Blocked;
    return uniform01(rng) < p ? BlockageState::Blocked : BlockageState::Unblocked;
}

BlockageProcess make_blockage_process(double p, double mean_blocked, double now, Rng &rng)
{
    BlockageProcess proc;
    proc.p_stationary = std::clamp(p, 0.0, 1.0);
    proc.mean_blocked = mean_blocked;
    proc.mean_unblocked = mean_unblocked_duration(proc.p_stationary, mean_blocked);
    proc.state = sample_initial_state(proc.p_stationary, rng);
    // Exponential sojourns are memoryless, so the residual of the sojourn in
    // progress has the full sojourn distribution.
    proc.next_transition = now + draw_sojourn(proc.state, proc, rng);
    return proc;
}

void retarget(BlockageProcess &proc, double p, double now, Rng &rng)
{
    if (p == proc.p_stationary)
        return;
    proc.p_stationary = std::clamp(p, 0.0, 1.0);
    proc.mean_unblocked = mean_unblocked_duration(proc.p_stationary, proc.mean_blocked);
    if (!std::isfinite(proc.next_transition))
        proc.next_transition = now + draw_sojourn(proc.state, proc, rng);
}

int advance(BlockageProcess &proc, double now, Rng &rng)
{
    int flips = 0;
    while (now >= proc.next_transition) {
        proc.state = proc.blocked() ? BlockageState::Unblocked : BlockageState::Blocked;
        proc.next_transition += draw_sojourn(proc.state, proc, rng);
        ++flips;
    }
    return flips;
}

} // namespace iabsim
