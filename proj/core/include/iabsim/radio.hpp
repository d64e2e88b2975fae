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


#ifndef IABSIM_RADIO_HPP
#define IABSIM_RADIO_HPP

#include "iabsim/config.hpp"
#include "iabsim/scenario.hpp"

namespace iabsim {

enum class PathLossProfile { UMa, UMi };

std::string_view to_string(PathLossProfile p);

struct LinkGeometry {
    double d2d = 0.0;
    double d3d = 0.0;
    double azimuth = 0.0;   // from tx boresight, radians
    double elevation = 0.0; // from tx boresight, radians
    double h_bs = 0.0;      // taller endpoint
    double h_ut = 0.0;      // shorter endpoint
};

// Geometry between two nodes with the tx beam steered at the rx (zero
// boresight offsets).
LinkGeometry make_geometry(const Node &a, const Node &b);

// UMa for links touching the 25 m donor, UMi otherwise (10 m IAB mast).
PathLossProfile select_profile(const LinkGeometry &g, const Config &cfg);

double free_space_loss_db(double d3d, double fc_hz);

// TR 38.901 UMa / UMi street-canyon path loss. d3d below 10 m is evaluated
// at 10 m. The result never drops below free-space loss.
double path_loss_db(const LinkGeometry &g, PathLossProfile profile, bool los, double fc_hz);

// TR 38.901 LOS probability (h_ut taken from the geometry for UMa).
double los_probability(const LinkGeometry &g, PathLossProfile profile);

// Log-normal shadow fading standard deviation.
double shadowing_sigma_db(PathLossProfile profile, bool los);

struct ChannelState {
    bool los = true;
    bool blocked = false;
    double path_loss = 0.0; // dB, deterministic part
    double shadowing = 0.0; // dB, added to path_loss

    double total_loss(double blockage_extra_loss) const
    {
        return path_loss + shadowing + (blocked ? blockage_extra_loss : 0.0);
    }
};

// TR 38.901 single-element pattern, dBi. Angles are offsets from boresight.
double element_gain_db(double azimuth, double elevation, double max_gain_dbi = 8.0);

// Normalized power array factor of an N-element half-wavelength ULA steered
// to boresight, evaluated at phase progression psi = pi*sin(angle). In [0, 1].
double ula_array_factor(int n, double psi);

// Element pattern plus uniform-planar-array factor, steered to boresight.
// Boresight value: max_gain_dbi + 10*log10(rows*cols).
double antenna_gain_db(const ArraySize &array, double azimuth, double elevation = 0.0,
                       double max_gain_dbi = 8.0);

inline double boresight_gain_db(const ArraySize &array, double max_gain_dbi)
{
    return antenna_gain_db(array, 0.0, 0.0, max_gain_dbi);
}

// Received power with the tx power split evenly over `beams_active` beams.
double rsrp_dbm(double tx_power_dbm, int beams_active, double g_tx_dbi, double g_rx_dbi, double path_loss_db,
                bool blocked, double blockage_extra_loss_db);

double rsrp_dbm(const Node &tx, const Node &rx, const ChannelState &ch, int beams_active, const Config &cfg);

// Thermal noise over the full carrier plus the receiver noise figure.
double noise_power_dbm(const Config &cfg, double noise_figure_db);

struct LinkBudget {
    double rsrp = 0.0;                // dBm
    double snr_effective = 0.0;       // dB, after the interference margin
    double spectral_efficiency = 0.0; // bit/s/Hz, capped
};

double spectral_efficiency(double snr_db, double se_cap);

LinkBudget make_link_budget(double rsrp, double noise_figure_db, const Config &cfg);

// bandwidth * fraction * min(log2(1 + snr), se_cap)
double link_capacity_bps(const LinkBudget &budget, double bandwidth_fraction, const Config &cfg);

} // namespace iabsim

#endif
