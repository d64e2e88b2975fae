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


#include "iabsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iabsim {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kEffectiveEnvHeight = 1.0;

double breakpoint_distance(double h_bs, double h_ut, double fc_hz)
{
    return 4.0 * (h_bs - kEffectiveEnvHeight) * (h_ut - kEffectiveEnvHeight) * fc_hz / kSpeedOfLight;
}

double uma_los(double d2d, double d3d, double fc_ghz, double h_bs, double h_ut, double d_bp)
{
    if (d2d <= d_bp)
        return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
    return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
           9.0 * std::log10(d_bp * d_bp + (h_bs - h_ut) * (h_bs - h_ut));
}

double umi_los(double d2d, double d3d, double fc_ghz, double h_bs, double h_ut, double d_bp)
{
    if (d2d <= d_bp)
        return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
    return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
           9.5 * std::log10(d_bp * d_bp + (h_bs - h_ut) * (h_bs - h_ut));
}

} // namespace

std::string_view to_string(PathLossProfile p) { return p == PathLossProfile::UMa ? "UMa" : "UMi"; }

LinkGeometry make_geometry(const Node &a, const Node &b)
{
    LinkGeometry g;
    g.d2d = std::hypot(a.position.x - b.position.x, a.position.y - b.position.y);
    const double dh = a.height - b.height;
    g.d3d = std::hypot(g.d2d, dh);
    g.h_bs = std::max(a.height, b.height);
    g.h_ut = std::min(a.height, b.height);
    return g;
}

PathLossProfile select_profile(const LinkGeometry &g, const Config &cfg)
{
    return g.h_bs >= cfg.height_dgnb ? PathLossProfile::UMa : PathLossProfile::UMi;
}

double free_space_loss_db(double d3d, double fc_hz)
{
    return 20.0 * std::log10(4.0 * std::numbers::pi * d3d * fc_hz / kSpeedOfLight);
}

double path_loss_db(const LinkGeometry &g, PathLossProfile profile, bool los, double fc_hz)
{
    const double d3d = std::max(g.d3d, 10.0);
    const double d2d = std::max(g.d2d, std::sqrt(std::max(0.0, d3d * d3d - (g.h_bs - g.h_ut) * (g.h_bs - g.h_ut))));
    const double fc_ghz = fc_hz / 1e9;
    const double h_ut = g.h_ut;
    const double d_bp = breakpoint_distance(g.h_bs, g.h_ut, fc_hz);

    double pl = 0.0;
    switch (profile) {
    case PathLossProfile::UMa: {
        const double pl_los = uma_los(d2d, d3d, fc_ghz, g.h_bs, h_ut, d_bp);
        pl = los ? pl_los
                 : std::max(pl_los, 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) - 0.6 * (h_ut - 1.5));
        break;
    }
    case PathLossProfile::UMi: {
        const double pl_los = umi_los(d2d, d3d, fc_ghz, g.h_bs, h_ut, d_bp);
        pl = los ? pl_los
                 : std::max(pl_los, 22.4 + 35.3 * std::log10(d3d) + 21.3 * std::log10(fc_ghz) - 0.3 * (h_ut - 1.5));
        break;
    }
    default:
        throw std::invalid_argument("unsupported path loss profile");
    }
    return std::max(pl, free_space_loss_db(d3d, fc_hz));
}

double los_probability(const LinkGeometry &g, PathLossProfile profile)
{
    const double d = g.d2d;
    if (d <= 18.0)
        return 1.0;
    switch (profile) {
    case PathLossProfile::UMi:
        return 18.0 / d + std::exp(-d / 36.0) * (1.0 - 18.0 / d);
    case PathLossProfile::UMa: {
        const double c = g.h_ut <= 13.0 ? 0.0 : std::pow((g.h_ut - 13.0) / 10.0, 1.5);
        return (18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d)) *
               (1.0 + c * 1.25 * std::pow(d / 100.0, 3.0) * std::exp(-d / 150.0));
    }
    }
    throw std::invalid_argument("unsupported path loss profile");
}

double shadowing_sigma_db(PathLossProfile profile, bool los)
{
    if (profile == PathLossProfile::UMa)
        return los ? 4.0 : 6.0;
    return los ? 4.0 : 7.82;
}

double element_gain_db(double azimuth, double elevation, double max_gain_dbi)
{
    constexpr double kBeamwidthDeg = 65.0;
    constexpr double kSideLobeDb = 30.0;
    const double az_deg = azimuth * 180.0 / std::numbers::pi;
    const double el_deg = elevation * 180.0 / std::numbers::pi;
    const double a_h = -std::min(12.0 * (az_deg / kBeamwidthDeg) * (az_deg / kBeamwidthDeg), kSideLobeDb);
    const double a_v = -std::min(12.0 * (el_deg / kBeamwidthDeg) * (el_deg / kBeamwidthDeg), kSideLobeDb);
    return max_gain_dbi - std::min(-(a_h + a_v), kSideLobeDb);
}

double ula_array_factor(int n, double psi)
{
    const double half = 0.5 * psi;
    const double s = std::sin(half);
    if (std::abs(s) < 1e-12)
        return 1.0;
    const double af = std::sin(n * half) / (n * s);
    return af * af;
}

double antenna_gain_db(const ArraySize &array, double azimuth, double elevation, double max_gain_dbi)
{
    const double psi_h = std::numbers::pi * std::sin(azimuth) * std::cos(elevation);
    const double psi_v = std::numbers::pi * std::sin(elevation);
    const double af = ula_array_factor(array.cols, psi_h) * ula_array_factor(array.rows, psi_v);
    // Floor keeps nulls finite.
    const double array_gain = std::max(array.elements() * af, 1e-12);
    return element_gain_db(azimuth, elevation, max_gain_dbi) + 10.0 * std::log10(array_gain);
}

double rsrp_dbm(double tx_power_dbm, int beams_active, double g_tx_dbi, double g_rx_dbi, double path_loss_db,
                bool blocked, double blockage_extra_loss_db)
{
    return tx_power_dbm - 10.0 * std::log10(static_cast<double>(std::max(beams_active, 1))) + g_tx_dbi + g_rx_dbi -
           path_loss_db - (blocked ? blockage_extra_loss_db : 0.0);
}

double rsrp_dbm(const Node &tx, const Node &rx, const ChannelState &ch, int beams_active, const Config &cfg)
{
    return rsrp_dbm(tx.tx_power_dbm, beams_active, boresight_gain_db(tx.array, cfg.element_gain),
                    boresight_gain_db(rx.array, cfg.element_gain), ch.path_loss + ch.shadowing, ch.blocked,
                    cfg.blockage_extra_loss);
}

double noise_power_dbm(const Config &cfg, double noise_figure_db)
{
    return cfg.noise_psd + 10.0 * std::log10(cfg.bandwidth) + noise_figure_db;
}

double spectral_efficiency(double snr_db, double se_cap)
{
    const double se = std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
    return std::clamp(se, 0.0, se_cap);
}

LinkBudget make_link_budget(double rsrp, double noise_figure_db, const Config &cfg)
{
    LinkBudget b;
    b.rsrp = rsrp;
    b.snr_effective = rsrp - noise_power_dbm(cfg, noise_figure_db) - cfg.interference_margin;
    b.spectral_efficiency = spectral_efficiency(b.snr_effective, cfg.se_cap);
    return b;
}

double link_capacity_bps(const LinkBudget &budget, double bandwidth_fraction, const Config &cfg)
{
    const double f = std::clamp(bandwidth_fraction, 0.0, 1.0);
    return cfg.bandwidth * f * std::min(budget.spectral_efficiency, cfg.se_cap);
}

} // namespace iabsim
