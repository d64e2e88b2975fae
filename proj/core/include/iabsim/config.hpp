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

#ifndef IABSIM_CONFIG_HPP
#define IABSIM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iabsim {

enum class AssociationScheme { MinHops, MaxRsrp };
enum class SlotFormatPolicy { Static5050, PF, WPF };
enum class ConnectivityMode { SC, MC, SC_FS, SC_FS_Scan };
enum class BeamConfig { AllSingle, DgnbMulti, AllMulti };

std::string_view to_string(AssociationScheme v);
std::string_view to_string(SlotFormatPolicy v);
std::string_view to_string(ConnectivityMode v);
std::string_view to_string(BeamConfig v);

struct ArraySize {
    int rows = 1;
    int cols = 1;

    int elements() const { return rows * cols; }
    bool operator==(const ArraySize &) const = default;
};

// Every simulation parameter. Units are SI unless the name says otherwise
// (dBm, dB, bytes). Defaults reproduce the reference deployment.
struct Config {
    double carrier_frequency = 30e9;
    double bandwidth = 400e6;
    int num_ues = 60;
    double cell_radius = 500.0;
    double tx_power_dgnb = 40.0;
    double tx_power_iab = 33.0;
    double tx_power_ue = 23.0;
    int num_iab = 3;
    int num_dgnb = 1;
    double noise_figure_bs = 7.0;
    double noise_figure_ue = 13.0;
    double noise_psd = -173.93;
    ArraySize array_ue{4, 4};
    ArraySize array_bs{16, 16};
    double element_gain = 8.0;
    double ue_speed = 3.0 / 3.6;
    double height_dgnb = 25.0;
    double height_iab = 10.0;
    double height_ue = 1.5;
    double height_blocker = 1.5;
    double blocker_radius = 0.2;
    double blocker_density = 0.0;
    int mc_degree = 2;
    std::int64_t file_size = 2'000'000;
    double session_rate_ul = 0.2;
    double session_rate_dl = 0.5;
    AssociationScheme association_scheme = AssociationScheme::MaxRsrp;
    SlotFormatPolicy slot_format_policy = SlotFormatPolicy::PF;
    ConnectivityMode connectivity_mode = ConnectivityMode::SC;
    BeamConfig beam_config = BeamConfig::AllSingle;
    double sim_duration = 100.0;
    double warmup = 10.0;
    std::uint64_t seed = 1;
    double interference_margin = 3.0;
    double blockage_extra_loss = 20.0;
    double rsrp_threshold = -62.0;
    double scan_period = 0.1;
    double se_cap = 7.4;
    double topology_period = 1.0;
    double mobility_tick = 0.0125;
    double direction_redraw_period = 10.0;
    double switch_delay = 0.0;
    int guard_symbols = 1;
    int format_update_slots = 80;
    double format_clamp_min = 0.1;
    double format_clamp_max = 0.9;
    bool shadowing = true;
};

struct FieldError {
    std::string field;
    std::string message;
};

// Either a validated Config or the full list of violated constraints.
class ValidationResult {
public:
    static ValidationResult ok(Config cfg);
    static ValidationResult failed(std::vector<FieldError> errors);

    bool valid() const { return config_.has_value(); }
    explicit operator bool() const { return valid(); }
    const Config &config() const;
    const std::vector<FieldError> &errors() const { return errors_; }
    std::string error_summary() const;

private:
    std::optional<Config> config_;
    std::vector<FieldError> errors_;
};

ValidationResult validate_config(const Config &raw);

// Thrown by the text loaders for malformed lines, unknown keys and
// unparsable values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Names of all settable keys, in canonical (serialization) order.
const std::vector<std::string> &config_keys();

bool is_config_key(std::string_view key);

// Sets one field from its text form. Throws ConfigError on unknown key or
// bad value.
void set_config_value(Config &cfg, std::string_view key, std::string_view value);

std::string get_config_value(const Config &cfg, std::string_view key);

// Applies `key = value` lines; `#` starts a comment. Later lines win.
void apply_config_text(Config &cfg, std::string_view text);
Config load_config_file(const std::string &path, const Config &base = {});

// Applies a `key=value` override as given on the command line.
void apply_override(Config &cfg, std::string_view assignment);

// All fields in canonical order, values formatted to round-trip exactly.
std::vector<std::pair<std::string, std::string>> config_to_key_values(const Config &cfg);
void write_config(std::ostream &out, const Config &cfg);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

} // namespace iabsim

#endif
