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


#ifndef IABSIM_BLOCKAGE_HPP
#define IABSIM_BLOCKAGE_HPP

#include "iabsim/config.hpp"
#include "iabsim/rng.hpp"

#include <limits>

namespace iabsim {

enum class BlockageState { Unblocked, Blocked };

// Human-body blockage of one link as an alternating renewal process with
// exponential sojourns. With p_stationary = 0 (or 1) the process stays
// unblocked (or blocked) forever.
struct BlockageProcess {
    BlockageState state = BlockageState::Unblocked;
    double next_transition = std::numeric_limits<double>::infinity();
    double p_stationary = 0.0;
    double mean_blocked = 0.0;
    double mean_unblocked = std::numeric_limits<double>::infinity();

    bool blocked() const { return state == BlockageState::Blocked; }
};

// Probability that a link of horizontal length d2d is blocked at a random
// instant. Throws std::invalid_argument if h_tx <= h_rx.
double stationary_blockage_probability(double d2d, double h_tx, double h_rx, const Config &cfg);

// Mean blocked interval: time for a blocker of radius r_B moving at v_B to
// cross the line of sight.
double mean_blocked_duration(const Config &cfg);

// Mean unblocked interval that yields stationary probability p.
double mean_unblocked_duration(double p, double mean_blocked);

BlockageState sample_initial_state(double p, Rng &rng);

// New process started at `now` in its stationary regime.
BlockageProcess make_blockage_process(double p, double mean_blocked, double now, Rng &rng);

// Re-targets the stationary probability (e.g. after geometry changed). The
// current sojourn is kept; following sojourns use the new means. A process
// parked forever in one state (p was 0 or 1) restarts its clock at `now`.
void retarget(BlockageProcess &proc, double p, double now, Rng &rng);

// Applies every transition with next_transition <= now. Returns the number
// of state flips.
int advance(BlockageProcess &proc, double now, Rng &rng);

} // namespace iabsim

#endif
