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


#include "iabsim/engine.hpp"

#include <cmath>

#include "json.hpp"

namespace iabsim {

namespace {

// JSON has no NaN/inf; non-finite values become null.
nlohmann::ordered_json number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

} // namespace

std::string report_to_json(const MetricsReport &r)
{
    nlohmann::ordered_json j;
    nlohmann::ordered_json cfg;
    for (const auto &[key, value] : config_to_key_values(r.config))
        cfg[key] = value;
    j["config"] = std::move(cfg);
    j["seed"] = r.seed;
    j["warmup_excluded"] = r.warmup_excluded;
    j["insufficient_data"] = r.insufficient_data;
    j["mean_ue_throughput"] = number(r.mean_ue_throughput);
    j["mean_dl_session_throughput"] = number(r.mean_dl_session_throughput);
    j["mean_ul_session_throughput"] = number(r.mean_ul_session_throughput);
    j["ues_with_sessions"] = r.ues_with_sessions;
    j["completed_sessions"] = r.completed_sessions;
    j["pending_sessions"] = r.pending_sessions;
    j["completed_dl"] = r.completed_dl;
    j["completed_ul"] = r.completed_ul;
    j["switches_blockage"] = r.switches_blockage;
    j["switches_scan"] = r.switches_scan;
    j["mean_relay_queue_bytes"] = number(r.mean_relay_queue_bytes);
    j["mean_c_dl"] = number(r.mean_c_dl);
    j["blocked_link_fraction"] = number(r.blocked_link_fraction);
    j["max_attach_failures"] = r.max_attach_failures;
    j["mean_hops"] = number(r.mean_hops);
    j["slots"] = r.slots;
    j["half_duplex_violations"] = r.half_duplex_violations;
    j["beam_overflows"] = r.beam_overflows;
    j["offered_bytes"] = r.offered_bytes;
    j["served_bytes"] = r.served_bytes;
    j["conservation_ok"] = r.conservation_ok;
    auto per_ue = nlohmann::ordered_json::array();
    for (double v : r.per_ue_mean)
        per_ue.push_back(number(v));
    j["per_ue_mean_throughput"] = std::move(per_ue);
    return j.dump(2);
}

} // namespace iabsim
