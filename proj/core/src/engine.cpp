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

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "iabsim/blockage.hpp"
#include "iabsim/connectivity.hpp"
#include "iabsim/mac.hpp"
#include "iabsim/radio.hpp"
#include "iabsim/rng.hpp"
#include "iabsim/scenario.hpp"
#include "iabsim/topology.hpp"

namespace iabsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

long long slots_for(double period, double dt) { return std::max<long long>(1, std::llround(period / dt)); }

// Per node-pair large-scale channel. The LOS state is re-evaluated every
// topology epoch against a per-pair uniform variate, so it only changes when
// the geometry does; shadowing is redrawn when the LOS state flips.
struct PairChannel {
    bool valid = false;
    double los_variate = 0.0;
    double shadow_variate = 0.0;
    ChannelState state;
};

struct BlockageEntry {
    double time;
    int index;
    bool operator>(const BlockageEntry &o) const { return time > o.time || (time == o.time && index > o.index); }
};

class Simulator {
public:
    Simulator(const Config &cfg, const RunOptions &opt);
    MetricsReport run();

private:
    int ue_index(NodeId n) const { return n - first_ue_; }
    bool is_ue(NodeId n) const { return n >= first_ue_; }
    std::size_t pair_index(NodeId a, NodeId b) const
    {
        return a < b ? static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)
                     : static_cast<std::size_t>(b) * n_ + static_cast<std::size_t>(a);
    }
    std::size_t directed(NodeId tx, NodeId rx) const
    {
        return static_cast<std::size_t>(tx) * n_ + static_cast<std::size_t>(rx);
    }
    double loss(NodeId a, NodeId b) const
    {
        const auto &st = channels_[pair_index(a, b)].state;
        return st.path_loss + st.shadowing;
    }
    bool link_blocked(NodeId a, NodeId b) const;
    bool parity_matches(NodeId scheduler, long long slot) const
    {
        return (topo_.depth[static_cast<std::size_t>(scheduler)] & 1) == static_cast<int>(slot & 1);
    }
    bool ue_available(NodeId ue, double now) const
    {
        return !serving_[static_cast<std::size_t>(ue_index(ue))].active.empty() &&
               now >= available_from_[static_cast<std::size_t>(ue_index(ue))];
    }

    void epoch(double now, bool first);
    void update_channels();
    void build_link_tables();
    void update_blockage_processes(double now, bool first);
    Candidate make_candidate(NodeId ue, NodeId bs, bool blockage_aware) const;
    std::vector<Candidate> candidates_for(NodeId ue, bool blockage_aware) const;
    void refresh_serving();
    void set_active(NodeId ue, std::vector<NodeId> active);
    void record_switch(const SwitchEvent &ev, double now);
    void reroute(NodeId ue);
    void advance_blockage(double now);
    void scan(double now);
    void update_formats();
    void generate_sessions(double t0, double t1);
    std::size_t held_key(Direction d, NodeId node) const
    {
        return (d == Direction::Dl ? 0 : n_) + static_cast<std::size_t>(node);
    }
    std::set<std::int64_t> &held(Direction d, NodeId node, int u)
    {
        return held_[held_key(d, node) * static_cast<std::size_t>(cfg_.num_ues) + static_cast<std::size_t>(u)];
    }
    void track(const Session &s, NodeId node);
    void serve_slot(long long slot, double t0, double t1);
    void sample_stats();
    void finish(MetricsReport &report);

    Config cfg_;
    RunOptions opt_;
    FrameStructure frame_;
    double dt_ = FrameStructure::kSlotDuration;
    Scenario sc_;
    std::size_t n_ = 0;
    NodeId first_ue_ = 0;
    int nbs_ = 0;
    CandidateOrder order_ = CandidateOrder::ByRsrp;

    Rng mobility_rng_;
    Rng channel_rng_;
    Rng blockage_rng_;
    std::vector<ArrivalProcess> dl_arrivals_;
    std::vector<ArrivalProcess> ul_arrivals_;

    std::vector<NodeKind> kinds_;
    std::vector<double> gain_;
    std::vector<PairChannel> channels_;
    RsrpMatrix rsrp_;
    FeasibleLinkSet links_;
    Topology topo_;
    std::vector<int> beams_;
    std::vector<std::array<double, 2>> se_dl_; // [parent -> child][blocked]
    std::vector<std::array<double, 2>> se_ul_; // [child -> parent][blocked]

    std::vector<BlockageProcess> blockage_; // [ue_index * nbs + bs]
    std::priority_queue<BlockageEntry, std::vector<BlockageEntry>, std::greater<>> blockage_queue_;

    std::vector<ServingSet> serving_;
    std::vector<double> available_from_;
    std::vector<SlotFormat> formats_;

    std::map<std::int64_t, Session> sessions_; // by id, i.e. arrival order
    // Ids of sessions with bytes waiting at a node, per direction and UE, and
    // the UEs with anything waiting there. Keeps per-slot work independent of
    // the backlog.
    std::vector<std::set<std::int64_t>> held_;
    std::vector<std::vector<int>> held_ues_;
    std::vector<std::int64_t> completed_;
    std::vector<SessionRecord> log_;
    std::vector<int> pending_dl_;
    std::vector<int> pending_ul_;
    std::int64_t next_session_id_ = 0;

    std::vector<ParentDemand> demands_;
    std::vector<std::uint8_t> link_flags_; // [parent * n + child]: bit 0 DL, bit 1 UL
    std::vector<std::pair<NodeId, NodeId>> marked_;

    // accumulators
    std::int64_t offered_bytes_ = 0;
    std::int64_t delivered_bytes_ = 0;
    std::int64_t switches_blockage_ = 0;
    std::int64_t switches_scan_ = 0;
    std::int64_t hd_violations_ = 0;
    std::int64_t beam_overflows_ = 0;
    int max_attach_failures_ = 0;
    double queue_sum_ = 0.0;
    double c_dl_sum_ = 0.0;
    double blocked_sum_ = 0.0;
    double hops_sum_ = 0.0;
    std::int64_t samples_ = 0;
    std::int64_t c_dl_samples_ = 0;
    std::int64_t blocked_samples_ = 0;
    std::int64_t hops_samples_ = 0;
};

Simulator::Simulator(const Config &cfg, const RunOptions &opt) : cfg_(cfg), opt_(opt)
{
    frame_.guard_symbols = cfg.guard_symbols;
    frame_.slots_per_frame = cfg.format_update_slots;
    sc_ = generate_deployment(cfg, cfg.seed);
    n_ = sc_.size();
    first_ue_ = sc_.first_ue();
    nbs_ = sc_.num_base_stations();
    order_ = candidate_order(cfg.association_scheme);

    mobility_rng_ = make_stream(cfg.seed, Stream::Mobility, 1);
    channel_rng_ = make_stream(cfg.seed, Stream::Channel);
    blockage_rng_ = make_stream(cfg.seed, Stream::Blockage);
    for (int u = 0; u < cfg.num_ues; ++u) {
        dl_arrivals_.push_back(
            make_arrival_process(cfg.session_rate_dl, make_stream(cfg.seed, Stream::TrafficDl, static_cast<std::uint64_t>(u))));
        ul_arrivals_.push_back(
            make_arrival_process(cfg.session_rate_ul, make_stream(cfg.seed, Stream::TrafficUl, static_cast<std::uint64_t>(u))));
    }

    for (const auto &node : sc_.nodes) {
        kinds_.push_back(node.kind);
        gain_.push_back(boresight_gain_db(node.array, cfg.element_gain));
    }
    channels_.assign(n_ * n_, PairChannel{});
    se_dl_.assign(n_ * n_, {0.0, 0.0});
    se_ul_.assign(n_ * n_, {0.0, 0.0});
    serving_.assign(static_cast<std::size_t>(cfg.num_ues), ServingSet{});
    for (auto &s : serving_)
        s.mode = cfg.connectivity_mode;
    available_from_.assign(static_cast<std::size_t>(cfg.num_ues), 0.0);
    formats_.assign(n_, slot_format_static());
    pending_dl_.assign(static_cast<std::size_t>(cfg.num_ues), 0);
    pending_ul_.assign(static_cast<std::size_t>(cfg.num_ues), 0);
    link_flags_.assign(n_ * n_, 0);
    held_.resize(2 * n_ * static_cast<std::size_t>(cfg.num_ues));
    held_ues_.resize(2 * n_);
}

void Simulator::track(const Session &s, NodeId node)
{
    const int u = ue_index(s.ue);
    auto &ids = held(s.direction, node, u);
    auto &ues = held_ues_[held_key(s.direction, node)];
    if (s.available_at(node) > 0) {
        if (ids.insert(s.id).second && ids.size() == 1)
            ues.push_back(u);
    } else if (ids.erase(s.id) > 0 && ids.empty()) {
        ues.erase(std::find(ues.begin(), ues.end(), u));
    }
}

bool Simulator::link_blocked(NodeId a, NodeId b) const
{
    if (is_ue(a) == is_ue(b))
        return false;
    const NodeId ue = is_ue(a) ? a : b;
    const NodeId bs = is_ue(a) ? b : a;
    return blockage_[static_cast<std::size_t>(ue_index(ue) * nbs_ + bs)].blocked();
}

void Simulator::update_channels()
{
    for (NodeId a = 0; a < static_cast<NodeId>(n_); ++a) {
        for (NodeId b = a + 1; b < static_cast<NodeId>(n_); ++b) {
            if (is_ue(a) && is_ue(b))
                continue;
            auto &pc = channels_[pair_index(a, b)];
            const LinkGeometry g = make_geometry(sc_.nodes[static_cast<std::size_t>(a)],
                                                 sc_.nodes[static_cast<std::size_t>(b)]);
            const PathLossProfile profile = select_profile(g, cfg_);
            const double p_los = los_probability(g, profile);
            if (!pc.valid) {
                pc.valid = true;
                pc.los_variate = uniform01(channel_rng_);
                pc.shadow_variate = standard_normal(channel_rng_);
                pc.state.los = pc.los_variate < p_los;
            } else {
                const bool los = pc.los_variate < p_los;
                if (los != pc.state.los)
                    pc.shadow_variate = standard_normal(channel_rng_);
                pc.state.los = los;
            }
            pc.state.path_loss = path_loss_db(g, profile, pc.state.los, cfg_.carrier_frequency);
            pc.state.shadowing = cfg_.shadowing ? pc.shadow_variate * shadowing_sigma_db(profile, pc.state.los) : 0.0;
        }
    }
}

void Simulator::build_link_tables()
{
    rsrp_ = RsrpMatrix(n_);
    for (NodeId tx = 0; tx < nbs_; ++tx) {
        for (NodeId rx = 1; rx < static_cast<NodeId>(n_); ++rx) {
            if (rx == tx)
                continue;
            const auto &t = sc_.nodes[static_cast<std::size_t>(tx)];
            rsrp_(tx, rx) = rsrp_dbm(t.tx_power_dbm, 1, gain_[static_cast<std::size_t>(tx)],
                                     gain_[static_cast<std::size_t>(rx)], loss(tx, rx), false, 0.0);
        }
    }
}

void Simulator::update_blockage_processes(double now, bool first)
{
    const double mean_blocked = mean_blocked_duration(cfg_);
    if (first)
        blockage_.resize(static_cast<std::size_t>(cfg_.num_ues * nbs_));
    for (int u = 0; u < cfg_.num_ues; ++u) {
        const NodeId ue = first_ue_ + u;
        for (NodeId bs = 0; bs < nbs_; ++bs) {
            const auto &a = sc_.nodes[static_cast<std::size_t>(bs)];
            const auto &b = sc_.nodes[static_cast<std::size_t>(ue)];
            const double d2d = std::hypot(a.position.x - b.position.x, a.position.y - b.position.y);
            const double p = stationary_blockage_probability(d2d, a.height, b.height, cfg_);
            const int idx = u * nbs_ + bs;
            auto &proc = blockage_[static_cast<std::size_t>(idx)];
            const double before = proc.next_transition;
            if (first)
                proc = make_blockage_process(p, mean_blocked, now, blockage_rng_);
            else
                retarget(proc, p, now, blockage_rng_);
            if (std::isfinite(proc.next_transition) && (first || proc.next_transition != before))
                blockage_queue_.push({proc.next_transition, idx});
        }
    }
}

Candidate Simulator::make_candidate(NodeId ue, NodeId bs, bool blockage_aware) const
{
    Candidate c;
    c.node = bs;
    c.hops = topo_.depth[static_cast<std::size_t>(bs)] + 1;
    c.blocked = blockage_aware && link_blocked(bs, ue);
    double access = rsrp_(bs, ue);
    if (c.blocked)
        access -= cfg_.blockage_extra_loss;
    c.rsrp = cfg_.association_scheme == AssociationScheme::MaxRsrp
                 ? std::min(access, topo_.bottleneck[static_cast<std::size_t>(bs)])
                 : access;
    return c;
}

std::vector<Candidate> Simulator::candidates_for(NodeId ue, bool blockage_aware) const
{
    std::vector<Candidate> out;
    for (auto idx : links_.into[static_cast<std::size_t>(ue)]) {
        const NodeId bs = links_.links[idx].parent;
        if (!topo_.attached(bs))
            continue;
        out.push_back(make_candidate(ue, bs, blockage_aware));
    }
    return out;
}

void Simulator::record_switch(const SwitchEvent &ev, double now)
{
    if (ev.reason == SwitchReason::Blockage)
        ++switches_blockage_;
    else
        ++switches_scan_;
    if (opt_.switch_log != nullptr)
        write_switch_csv(*opt_.switch_log, ev);
    available_from_[static_cast<std::size_t>(ue_index(ev.ue))] = now + cfg_.switch_delay;
    reroute(ev.ue);
}

void Simulator::set_active(NodeId ue, std::vector<NodeId> active)
{
    auto &set = serving_[static_cast<std::size_t>(ue_index(ue))];
    if (set.active == active)
        return;
    set.active = std::move(active);
    reroute(ue);
}

void Simulator::refresh_serving()
{
    for (int u = 0; u < cfg_.num_ues; ++u) {
        const NodeId ue = first_ue_ + u;
        auto &set = serving_[static_cast<std::size_t>(u)];
        set.candidates = build_candidates(candidates_for(ue, false), order_);
        set.outage = set.candidates.empty();
        if (set.outage) {
            set_active(ue, {});
            continue;
        }
        switch (cfg_.connectivity_mode) {
        case ConnectivityMode::SC:
        case ConnectivityMode::MC:
            set_active(ue, select_serving(set, cfg_.mc_degree));
            break;
        case ConnectivityMode::SC_FS:
        case ConnectivityMode::SC_FS_Scan: {
            // re-association at the epoch; the blocked top is skipped right away
            NodeId pick = set.candidates.front().node;
            for (const auto &c : set.candidates) {
                if (!link_blocked(c.node, ue)) {
                    pick = c.node;
                    break;
                }
            }
            set_active(ue, {pick});
            break;
        }
        }
    }
}

void Simulator::epoch(double now, bool first)
{
    update_channels();
    build_link_tables();
    links_ = feasible_links(kinds_, rsrp_, cfg_.rsrp_threshold);
    topo_ = cfg_.association_scheme == AssociationScheme::MinHops ? form_topology_min_hops(links_)
                                                                   : form_topology_max_rsrp(links_);
    int iab_detached = 0;
    for (NodeId d : topo_.detached)
        iab_detached += d < first_ue_ ? 1 : 0;
    max_attach_failures_ = std::max(max_attach_failures_, static_cast<int>(topo_.detached.size()));
    (void)iab_detached;
    if (first && opt_.topology_log != nullptr)
        write_topology_csv(*opt_.topology_log, topo_);

    beams_.assign(n_, 1);
    for (NodeId v = 0; v < nbs_; ++v)
        beams_[static_cast<std::size_t>(v)] = beams_active(topo_, v, sc_.nodes[static_cast<std::size_t>(v)].multi_beam);

    for (NodeId p = 0; p < nbs_; ++p) {
        const auto &pn = sc_.nodes[static_cast<std::size_t>(p)];
        for (NodeId c = 1; c < static_cast<NodeId>(n_); ++c) {
            if (c == p)
                continue;
            const auto &cn = sc_.nodes[static_cast<std::size_t>(c)];
            const double l = loss(p, c);
            const double gp = gain_[static_cast<std::size_t>(p)];
            const double gc = gain_[static_cast<std::size_t>(c)];
            for (int blocked = 0; blocked < 2; ++blocked) {
                const double dl = rsrp_dbm(pn.tx_power_dbm, beams_[static_cast<std::size_t>(p)], gp, gc, l,
                                           blocked != 0, cfg_.blockage_extra_loss);
                const double ul = rsrp_dbm(cn.tx_power_dbm, 1, gc, gp, l, blocked != 0, cfg_.blockage_extra_loss);
                se_dl_[directed(p, c)][static_cast<std::size_t>(blocked)] =
                    make_link_budget(dl, cn.noise_figure_db, cfg_).spectral_efficiency;
                se_ul_[directed(c, p)][static_cast<std::size_t>(blocked)] =
                    make_link_budget(ul, pn.noise_figure_db, cfg_).spectral_efficiency;
            }
        }
    }

    update_blockage_processes(now, first);
    refresh_serving();
    for (int u = 0; u < cfg_.num_ues; ++u)
        reroute(first_ue_ + u);
}

void Simulator::reroute(NodeId ue)
{
    const int u = ue_index(ue);
    const auto &active = serving_[static_cast<std::size_t>(u)].active;
    for (Direction dir : {Direction::Dl, Direction::Ul}) {
        // relays only; the donor is the DL source and the UL destination
        for (NodeId node = 1; node < nbs_; ++node) {
            auto &ids = held(dir, node, u);
            if (ids.empty())
                continue;
            bool keep = topo_.attached(node);
            if (keep && dir == Direction::Dl)
                keep = std::any_of(active.begin(), active.end(),
                                   [&](NodeId a) { return topo_.is_ancestor_or_self(node, a); });
            if (keep)
                continue;
            const std::vector<std::int64_t> stale(ids.begin(), ids.end());
            for (auto id : stale) {
                Session &s = sessions_.at(id);
                return_to_source(s, node);
                track(s, node);
                track(s, s.source());
            }
        }
    }
}

void Simulator::advance_blockage(double now)
{
    while (!blockage_queue_.empty() && blockage_queue_.top().time <= now) {
        const BlockageEntry top = blockage_queue_.top();
        blockage_queue_.pop();
        auto &proc = blockage_[static_cast<std::size_t>(top.index)];
        if (proc.next_transition != top.time)
            continue;
        const bool was_blocked = proc.blocked();
        advance(proc, now, blockage_rng_);
        if (std::isfinite(proc.next_transition))
            blockage_queue_.push({proc.next_transition, top.index});
        if (proc.blocked() == was_blocked)
            continue;

        const int u = top.index / nbs_;
        const NodeId bs = top.index % nbs_;
        const NodeId ue = first_ue_ + u;
        auto &set = serving_[static_cast<std::size_t>(u)];
        if (!proc.blocked() || !set.is_active(bs))
            continue;
        const auto ev = on_blockage_change(
            set, [&](NodeId node) { return link_blocked(node, ue); }, order_, now, ue);
        if (ev)
            record_switch(*ev, now);
    }
}

void Simulator::scan(double now)
{
    for (int u = 0; u < cfg_.num_ues; ++u) {
        const NodeId ue = first_ue_ + u;
        auto &set = serving_[static_cast<std::size_t>(u)];
        if (set.outage)
            continue;
        const auto ev = periodic_scan(set, now, cfg_.scan_period - 0.5 * dt_, candidates_for(ue, true), order_, ue);
        if (ev)
            record_switch(*ev, now);
    }
}

void Simulator::update_formats()
{
    std::vector<UeActivity> activity;
    activity.reserve(static_cast<std::size_t>(cfg_.num_ues));
    for (int u = 0; u < cfg_.num_ues; ++u) {
        UeActivity a;
        a.ue = first_ue_ + u;
        a.dl = pending_dl_[static_cast<std::size_t>(u)] > 0;
        a.ul = pending_ul_[static_cast<std::size_t>(u)] > 0;
        const auto &active = serving_[static_cast<std::size_t>(u)].active;
        for (std::size_t i = 0; i < active.size() && i < a.serving.size(); ++i)
            a.serving[i] = active[i];
        activity.push_back(a);
    }
    const ActivityCounts counts = count_active(topo_, activity);
    for (NodeId v = 0; v < nbs_; ++v) {
        auto &f = formats_[static_cast<std::size_t>(v)];
        switch (cfg_.slot_format_policy) {
        case SlotFormatPolicy::Static5050:
            f = slot_format_static();
            break;
        case SlotFormatPolicy::PF:
            f = slot_format_pf(counts.global.dl, counts.global.ul, cfg_.format_clamp_min, cfg_.format_clamp_max);
            break;
        case SlotFormatPolicy::WPF:
            f = slot_format_wpf(counts.per_node[static_cast<std::size_t>(v)], counts.global, cfg_.format_clamp_min,
                                cfg_.format_clamp_max);
            break;
        }
        if (topo_.attached(v) && !topo_.children[static_cast<std::size_t>(v)].empty()) {
            c_dl_sum_ += f.c_dl;
            ++c_dl_samples_;
        }
    }
}

void Simulator::generate_sessions(double t0, double t1)
{
    struct Arrival {
        double time;
        NodeId ue;
        Direction dir;
    };
    std::vector<Arrival> arrivals;
    std::vector<double> times;
    for (int u = 0; u < cfg_.num_ues; ++u) {
        times.clear();
        generate_arrivals(dl_arrivals_[static_cast<std::size_t>(u)], t1, times);
        for (double t : times)
            arrivals.push_back({t, first_ue_ + u, Direction::Dl});
        times.clear();
        generate_arrivals(ul_arrivals_[static_cast<std::size_t>(u)], t1, times);
        for (double t : times)
            arrivals.push_back({t, first_ue_ + u, Direction::Ul});
    }
    if (arrivals.empty())
        return;
    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival &a, const Arrival &b) {
        if (a.time != b.time)
            return a.time < b.time;
        if (a.ue != b.ue)
            return a.ue < b.ue;
        return a.dir < b.dir;
    });
    (void)t0;
    for (const auto &a : arrivals) {
        const std::int64_t id = next_session_id_++;
        const Session &s = sessions_.emplace(id, make_session(id, a.ue, a.dir, cfg_.file_size, a.time)).first->second;
        track(s, s.source());
        offered_bytes_ += cfg_.file_size;
        auto &count = a.dir == Direction::Dl ? pending_dl_ : pending_ul_;
        ++count[static_cast<std::size_t>(ue_index(a.ue))];
    }
}

void Simulator::serve_slot(long long slot, double t0, double t1)
{
    auto mark = [&](NodeId parent, NodeId child, Direction dir) {
        auto &f = link_flags_[directed(parent, child)];
        if (f == 0)
            marked_.emplace_back(parent, child);
        f |= dir == Direction::Dl ? 1 : 2;
    };

    for (NodeId holder = 0; holder < nbs_; ++holder) {
        if (!topo_.attached(holder) || !parity_matches(holder, slot))
            continue;
        for (int u : held_ues_[held_key(Direction::Dl, holder)]) {
            const NodeId ue = first_ue_ + u;
            for (NodeId a : serving_[static_cast<std::size_t>(u)].active) {
                if (a == holder) {
                    if (ue_available(ue, t0))
                        mark(holder, ue, Direction::Dl);
                } else if (const NodeId next = topo_.next_hop_down(holder, a); next >= 0) {
                    mark(holder, next, Direction::Dl);
                }
            }
        }
    }
    for (int u = 0; u < cfg_.num_ues; ++u) {
        const NodeId ue = first_ue_ + u;
        if (held_ues_[held_key(Direction::Ul, ue)].empty() || !ue_available(ue, t0))
            continue;
        for (NodeId a : serving_[static_cast<std::size_t>(u)].active)
            if (parity_matches(a, slot))
                mark(a, ue, Direction::Ul);
    }
    for (NodeId holder = 1; holder < nbs_; ++holder) {
        if (!topo_.attached(holder) || held_ues_[held_key(Direction::Ul, holder)].empty())
            continue;
        const NodeId p = topo_.parent[static_cast<std::size_t>(holder)];
        if (p >= 0 && parity_matches(p, slot))
            mark(p, holder, Direction::Ul);
    }
    demands_.clear();
    if (marked_.empty())
        return;
    std::sort(marked_.begin(), marked_.end());
    for (const auto &[parent, child] : marked_) {
        if (demands_.empty() || demands_.back().parent != parent) {
            ParentDemand pd;
            pd.parent = parent;
            pd.format = formats_[static_cast<std::size_t>(parent)];
            pd.multi_beam = sc_.nodes[static_cast<std::size_t>(parent)].multi_beam;
            demands_.push_back(std::move(pd));
        }
        auto &f = link_flags_[directed(parent, child)];
        demands_.back().children.push_back(
            {child, kinds_[static_cast<std::size_t>(child)] == NodeKind::Iab, (f & 1) != 0, (f & 2) != 0});
        f = 0;
    }
    marked_.clear();

    const Allocation alloc = schedule_slot(topo_, demands_, slot, frame_);
    const AllocationCheck check = verify_allocation(alloc, frame_);
    if (!check.ok()) {
        hd_violations_ += check.half_duplex_violations;
        beam_overflows_ += check.beam_overflows;
        std::ostringstream msg;
        msg << "allocation invariant violated in slot " << slot << ": " << check.half_duplex_violations
            << " half-duplex conflicts, " << check.beam_overflows << " beam overflows";
        throw RunError(msg.str());
    }
    if (opt_.allocation_trace != nullptr)
        write_allocation_csv(*opt_.allocation_trace, alloc);

    const double symbols_per_slot = cfg_.bandwidth * dt_;
    struct HopCache {
        NodeId tx;
        Direction dir;
        std::vector<std::pair<NodeId, std::set<std::int64_t> *>> next;
    };
    std::vector<HopCache> hops;
    std::vector<std::set<std::int64_t> *> queues;
    for (const auto &e : alloc.entries) {
        const bool blocked = link_blocked(e.tx, e.rx);
        const double se = e.direction == Direction::Dl ? se_dl_[directed(e.tx, e.rx)][blocked ? 1 : 0]
                                                       : se_ul_[directed(e.tx, e.rx)][blocked ? 1 : 0];
        Bytes budget = static_cast<Bytes>(std::floor(se * symbols_per_slot * e.fraction() / 8.0));
        // Next hops of everything waiting at tx, computed once per (tx, dir).
        auto cached = std::find_if(hops.begin(), hops.end(),
                                   [&](const HopCache &h) { return h.tx == e.tx && h.dir == e.direction; });
        if (cached == hops.end()) {
            HopCache h{e.tx, e.direction, {}};
            for (int u : held_ues_[held_key(e.direction, e.tx)]) {
                const NodeId ue = first_ue_ + u;
                auto *q = &held(e.direction, e.tx, u);
                if (e.direction == Direction::Ul) {
                    if (e.tx != ue) {
                        h.next.push_back({topo_.parent[static_cast<std::size_t>(e.tx)], q});
                    } else if (ue_available(ue, t0)) {
                        for (NodeId a : serving_[static_cast<std::size_t>(u)].active)
                            h.next.push_back({a, q});
                    }
                    continue;
                }
                for (NodeId a : serving_[static_cast<std::size_t>(u)].active) {
                    const NodeId nh = a == e.tx ? ue : topo_.next_hop_down(e.tx, a);
                    if (nh >= 0)
                        h.next.push_back({nh, q});
                }
            }
            std::sort(h.next.begin(), h.next.end());
            h.next.erase(std::unique(h.next.begin(), h.next.end()), h.next.end());
            hops.push_back(std::move(h));
            cached = std::prev(hops.end());
        }
        queues.clear();
        const auto lo = std::lower_bound(cached->next.begin(), cached->next.end(),
                                         std::pair<NodeId, std::set<std::int64_t> *>{e.rx, nullptr});
        for (auto it = lo; it != cached->next.end() && it->first == e.rx; ++it)
            queues.push_back(it->second);
        // FIFO across the eligible UEs: oldest session first
        while (budget > 0) {
            std::set<std::int64_t> *next = nullptr;
            for (auto *q : queues)
                if (!q->empty() && (next == nullptr || *q->begin() < *next->begin()))
                    next = q;
            if (next == nullptr)
                break;
            Session &s = sessions_.at(*next->begin());
            const Bytes moved = serve_bytes(s, e.tx, e.rx, budget, t1);
            if (moved <= 0)
                throw RunError("internal error: queued session without bytes");
            budget -= moved;
            track(s, e.tx);
            if (e.rx == s.destination()) {
                delivered_bytes_ += moved;
                if (s.completed())
                    completed_.push_back(s.id);
            } else {
                track(s, e.rx);
            }
        }
    }

    if (!completed_.empty()) {
        std::sort(completed_.begin(), completed_.end());
        for (auto id : completed_) {
            const auto it = sessions_.find(id);
            log_.push_back(to_record(it->second));
            auto &count = it->second.direction == Direction::Dl ? pending_dl_ : pending_ul_;
            --count[static_cast<std::size_t>(ue_index(it->second.ue))];
            sessions_.erase(it);
        }
        completed_.clear();
    }
}

void Simulator::sample_stats()
{
    Bytes queued = 0;
    for (const auto &[id, s] : sessions_)
        queued += s.in_flight();
    queue_sum_ += static_cast<double>(queued);
    ++samples_;
    for (int u = 0; u < cfg_.num_ues; ++u) {
        const NodeId ue = first_ue_ + u;
        for (NodeId a : serving_[static_cast<std::size_t>(u)].active) {
            blocked_sum_ += link_blocked(a, ue) ? 1.0 : 0.0;
            ++blocked_samples_;
        }
        const auto &active = serving_[static_cast<std::size_t>(u)].active;
        if (!active.empty()) {
            hops_sum_ += topo_.depth[static_cast<std::size_t>(active.front())] + 1;
            ++hops_samples_;
        }
    }
}

void Simulator::finish(MetricsReport &report)
{
    report.config = cfg_;
    report.seed = cfg_.seed;
    report.switches_blockage = switches_blockage_;
    report.switches_scan = switches_scan_;
    report.half_duplex_violations = hd_violations_;
    report.beam_overflows = beam_overflows_;
    report.max_attach_failures = max_attach_failures_;
    report.mean_relay_queue_bytes = samples_ > 0 ? queue_sum_ / static_cast<double>(samples_) : 0.0;
    report.mean_c_dl = c_dl_samples_ > 0 ? c_dl_sum_ / static_cast<double>(c_dl_samples_) : kNaN;
    report.blocked_link_fraction = blocked_samples_ > 0 ? blocked_sum_ / static_cast<double>(blocked_samples_) : 0.0;
    report.mean_hops = hops_samples_ > 0 ? hops_sum_ / static_cast<double>(hops_samples_) : kNaN;
    report.offered_bytes = offered_bytes_;
    report.served_bytes = delivered_bytes_;

    // End-of-run byte audit.
    bool ok = true;
    std::int64_t delivered = 0;
    for (const auto &r : log_)
        delivered += r.delivered;
    for (const auto &[id, s] : sessions_) {
        ok = ok && s.at_source >= 0 && s.at_source + s.in_flight() + s.delivered == s.size;
        for (const auto &h : s.buffered)
            ok = ok && h.bytes >= 0;
        delivered += s.delivered;
    }
    ok = ok && delivered == delivered_bytes_ && delivered_bytes_ <= offered_bytes_;
    report.conservation_ok = ok;

    std::vector<SessionRecord> all = log_;
    for (const auto &[id, s] : sessions_)
        all.push_back(to_record(s));
    if (opt_.session_log != nullptr) {
        write_session_csv_header(*opt_.session_log);
        for (const auto &r : all)
            write_session_csv(*opt_.session_log, r);
    }
    collect_metrics(all, cfg_.warmup, cfg_.num_ues, first_ue_, report);
}

MetricsReport Simulator::run()
{
    const long long total_slots = std::llround(cfg_.sim_duration / dt_);
    const long long topo_slots = slots_for(cfg_.topology_period, dt_);
    const long long mobility_slots = slots_for(cfg_.mobility_tick, dt_);
    const long long scan_slots = slots_for(cfg_.scan_period, dt_);
    const long long frame_slots = cfg_.format_update_slots;

    if (opt_.switch_log != nullptr)
        write_switch_csv_header(*opt_.switch_log);
    if (opt_.allocation_trace != nullptr)
        write_allocation_csv_header(*opt_.allocation_trace);

    for (long long k = 0; k < total_slots; ++k) {
        const double t0 = static_cast<double>(k) * dt_;
        const double t1 = static_cast<double>(k + 1) * dt_;
        if (k > 0 && k % mobility_slots == 0)
            step_mobility(sc_, cfg_.mobility_tick, t0, mobility_rng_);
        if (k % topo_slots == 0)
            epoch(t0, k == 0);
        advance_blockage(t0);
        if (cfg_.connectivity_mode == ConnectivityMode::SC_FS_Scan && k % scan_slots == 0)
            scan(t0);
        if (k % frame_slots == 0) {
            update_formats();
            sample_stats();
        }
        generate_sessions(t0, t1);
        serve_slot(k, t0, t1);
    }

    MetricsReport report;
    report.slots = total_slots;
    finish(report);
    return report;
}

} // namespace

void collect_metrics(std::span<const SessionRecord> log, double warmup, int num_ues, int first_ue,
                     MetricsReport &report)
{
    std::vector<double> sum(static_cast<std::size_t>(num_ues), 0.0);
    std::vector<int> count(static_cast<std::size_t>(num_ues), 0);
    double dl_sum = 0.0;
    double ul_sum = 0.0;
    std::int64_t dl_n = 0;
    std::int64_t ul_n = 0;
    report.completed_sessions = 0;
    report.pending_sessions = 0;
    for (const auto &r : log) {
        if (!r.completed()) {
            ++report.pending_sessions;
            continue;
        }
        ++report.completed_sessions;
        if (r.arrival < warmup)
            continue;
        const int u = r.ue - first_ue;
        if (u < 0 || u >= num_ues)
            continue;
        sum[static_cast<std::size_t>(u)] += r.throughput;
        ++count[static_cast<std::size_t>(u)];
        if (r.direction == Direction::Dl) {
            dl_sum += r.throughput;
            ++dl_n;
        } else {
            ul_sum += r.throughput;
            ++ul_n;
        }
    }
    report.completed_dl = dl_n;
    report.completed_ul = ul_n;
    report.per_ue_mean.assign(static_cast<std::size_t>(num_ues), kNaN);
    double network = 0.0;
    int with = 0;
    for (int u = 0; u < num_ues; ++u) {
        if (count[static_cast<std::size_t>(u)] == 0)
            continue;
        const double m = sum[static_cast<std::size_t>(u)] / count[static_cast<std::size_t>(u)];
        report.per_ue_mean[static_cast<std::size_t>(u)] = m;
        network += m;
        ++with;
    }
    report.ues_with_sessions = with;
    report.insufficient_data = with == 0;
    report.warmup_excluded = true;
    report.mean_ue_throughput = with > 0 ? network / with : kNaN;
    report.mean_dl_session_throughput = dl_n > 0 ? dl_sum / static_cast<double>(dl_n) : kNaN;
    report.mean_ul_session_throughput = ul_n > 0 ? ul_sum / static_cast<double>(ul_n) : kNaN;
}

MetricsReport run(const Config &cfg, const RunOptions &options)
{
    const ValidationResult v = validate_config(cfg);
    if (!v)
        throw RunError("invalid configuration: " + v.error_summary());
    Simulator sim(v.config(), options);
    return sim.run();
}

} // namespace iabsim
