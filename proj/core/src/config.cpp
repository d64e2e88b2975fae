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

#include "iabsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

namespace iabsim {

namespace {

constexpr std::array<std::string_view, 2> kAssociationNames{"MinHops", "MaxRsrp"};
constexpr std::array<std::string_view, 3> kFormatNames{"Static5050", "PF", "WPF"};
constexpr std::array<std::string_view, 4> kConnectivityNames{"SC", "MC", "SC_FS", "SC_FS_Scan"};
constexpr std::array<std::string_view, 3> kBeamNames{"AllSingle", "DgnbMulti", "AllMulti"};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    // from_chars does not accept a leading '+'
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    if (text == "inf" || text == "+inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError("invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
    return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text)
{
    text = trim(text);
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

ArraySize parse_array(std::string_view key, std::string_view text)
{
    text = trim(text);
    const auto x = text.find_first_of("xX");
    if (x == std::string_view::npos)
        throw ConfigError("invalid array size for '" + std::string(key) + "' (expected RxC): '" +
                          std::string(text) + "'");
    return {parse_int<int>(key, text.substr(0, x)), parse_int<int>(key, text.substr(x + 1))};
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view key, std::string_view text, const std::array<std::string_view, N> &names)
{
    text = trim(text);
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == text)
            return static_cast<Enum>(i);
    std::string allowed;
    for (auto n : names)
        allowed += (allowed.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(text) +
                      "' (allowed: " + allowed + ")");
}

struct Field {
    std::string name;
    std::function<std::string(const Config &)> get;
    std::function<void(Config &, std::string_view)> set;
};

Field real(std::string name, double Config::*m)
{
    return {name, [m](const Config &c) { return format_double(c.*m); },
            [m, name](Config &c, std::string_view v) { c.*m = parse_double(name, v); }};
}

Field integer(std::string name, int Config::*m)
{
    return {name, [m](const Config &c) { return std::to_string(c.*m); },
            [m, name](Config &c, std::string_view v) { c.*m = parse_int<int>(name, v); }};
}

Field array(std::string name, ArraySize Config::*m)
{
    return {name,
            [m](const Config &c) { return std::to_string((c.*m).rows) + "x" + std::to_string((c.*m).cols); },
            [m, name](Config &c, std::string_view v) { c.*m = parse_array(name, v); }};
}

template <typename Enum, std::size_t N>
Field enumeration(std::string name, Enum Config::*m, const std::array<std::string_view, N> &names)
{
    return {name, [m, &names](const Config &c) { return std::string(names[static_cast<std::size_t>(c.*m)]); },
            [m, name, &names](Config &c, std::string_view v) { c.*m = parse_enum<Enum>(name, v, names); }};
}

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("carrier_frequency", &Config::carrier_frequency));
        f.push_back(real("bandwidth", &Config::bandwidth));
        f.push_back(integer("num_ues", &Config::num_ues));
        f.push_back(real("cell_radius", &Config::cell_radius));
        f.push_back(real("tx_power_dgnb", &Config::tx_power_dgnb));
        f.push_back(real("tx_power_iab", &Config::tx_power_iab));
        f.push_back(real("tx_power_ue", &Config::tx_power_ue));
        f.push_back(integer("num_iab", &Config::num_iab));
        f.push_back(integer("num_dgnb", &Config::num_dgnb));
        f.push_back(real("noise_figure_bs", &Config::noise_figure_bs));
        f.push_back(real("noise_figure_ue", &Config::noise_figure_ue));
        f.push_back(real("noise_psd", &Config::noise_psd));
        f.push_back(array("array_ue", &Config::array_ue));
        f.push_back(array("array_bs", &Config::array_bs));
        f.push_back(real("element_gain", &Config::element_gain));
        f.push_back(real("ue_speed", &Config::ue_speed));
        f.push_back(real("height_dgnb", &Config::height_dgnb));
        f.push_back(real("height_iab", &Config::height_iab));
        f.push_back(real("height_ue", &Config::height_ue));
        f.push_back(real("height_blocker", &Config::height_blocker));
        f.push_back(real("blocker_radius", &Config::blocker_radius));
        f.push_back(real("blocker_density", &Config::blocker_density));
        f.push_back(integer("mc_degree", &Config::mc_degree));
        f.push_back({"file_size", [](const Config &c) { return std::to_string(c.file_size); },
                     [](Config &c, std::string_view v) { c.file_size = parse_int<std::int64_t>("file_size", v); }});
        f.push_back(real("session_rate_ul", &Config::session_rate_ul));
        f.push_back(real("session_rate_dl", &Config::session_rate_dl));
        f.push_back(enumeration("association_scheme", &Config::association_scheme, kAssociationNames));
        f.push_back(enumeration("slot_format_policy", &Config::slot_format_policy, kFormatNames));
        f.push_back(enumeration("connectivity_mode", &Config::connectivity_mode, kConnectivityNames));
        f.push_back(enumeration("beam_config", &Config::beam_config, kBeamNames));
        f.push_back(real("sim_duration", &Config::sim_duration));
        f.push_back(real("warmup", &Config::warmup));
        f.push_back({"seed", [](const Config &c) { return std::to_string(c.seed); },
                     [](Config &c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); }});
        f.push_back(real("interference_margin", &Config::interference_margin));
        f.push_back(real("blockage_extra_loss", &Config::blockage_extra_loss));
        f.push_back(real("rsrp_threshold", &Config::rsrp_threshold));
        f.push_back(real("scan_period", &Config::scan_period));
        f.push_back(real("se_cap", &Config::se_cap));
        f.push_back(real("topology_period", &Config::topology_period));
        f.push_back(real("mobility_tick", &Config::mobility_tick));
        f.push_back(real("direction_redraw_period", &Config::direction_redraw_period));
        f.push_back(real("switch_delay", &Config::switch_delay));
        f.push_back(integer("guard_symbols", &Config::guard_symbols));
        f.push_back(integer("format_update_slots", &Config::format_update_slots));
        f.push_back(real("format_clamp_min", &Config::format_clamp_min));
        f.push_back(real("format_clamp_max", &Config::format_clamp_max));
        f.push_back({"shadowing", [](const Config &c) { return std::string(c.shadowing ? "true" : "false"); },
                     [](Config &c, std::string_view v) { c.shadowing = parse_bool("shadowing", v); }});
        return f;
    }();
    return table;
}

const Field &find_field(std::string_view key)
{
    const auto &f = fields();
    const auto it = std::find_if(f.begin(), f.end(), [&](const Field &x) { return x.name == key; });
    if (it == f.end())
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    return *it;
}

} // namespace

std::string_view to_string(AssociationScheme v) { return kAssociationNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(SlotFormatPolicy v) { return kFormatNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(ConnectivityMode v) { return kConnectivityNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(BeamConfig v) { return kBeamNames[static_cast<std::size_t>(v)]; }

std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

ValidationResult ValidationResult::ok(Config cfg)
{
    ValidationResult r;
    r.config_ = std::move(cfg);
    return r;
}

ValidationResult ValidationResult::failed(std::vector<FieldError> errors)
{
    ValidationResult r;
    r.errors_ = std::move(errors);
    return r;
}

const Config &ValidationResult::config() const
{
    if (!config_)
        throw std::logic_error("config() called on a failed validation: " + error_summary());
    return *config_;
}

std::string ValidationResult::error_summary() const
{
    std::string s;
    for (const auto &e : errors_)
        s += (s.empty() ? "" : "; ") + e.field + ": " + e.message;
    return s;
}

ValidationResult validate_config(const Config &c)
{
    std::vector<FieldError> errs;
    auto require = [&](bool cond, const char *field, const std::string &msg) {
        if (!cond)
            errs.push_back({field, msg});
    };
    auto finite = [&](double v, const char *field) { require(std::isfinite(v), field, "must be finite"); };

    finite(c.carrier_frequency, "carrier_frequency");
    finite(c.bandwidth, "bandwidth");
    finite(c.cell_radius, "cell_radius");
    finite(c.tx_power_dgnb, "tx_power_dgnb");
    finite(c.tx_power_iab, "tx_power_iab");
    finite(c.tx_power_ue, "tx_power_ue");
    finite(c.noise_figure_bs, "noise_figure_bs");
    finite(c.noise_figure_ue, "noise_figure_ue");
    finite(c.noise_psd, "noise_psd");
    finite(c.height_dgnb, "height_dgnb");
    finite(c.height_iab, "height_iab");
    finite(c.height_ue, "height_ue");
    finite(c.height_blocker, "height_blocker");
    finite(c.blocker_radius, "blocker_radius");
    finite(c.blocker_density, "blocker_density");
    finite(c.ue_speed, "ue_speed");
    finite(c.element_gain, "element_gain");
    finite(c.interference_margin, "interference_margin");
    finite(c.blockage_extra_loss, "blockage_extra_loss");

    require(c.carrier_frequency > 0, "carrier_frequency", "carrier_frequency > 0 required");
    require(c.bandwidth > 0, "bandwidth", "bandwidth > 0 required");
    require(c.num_ues >= 1, "num_ues", "num_ues >= 1 required");
    require(c.cell_radius > 0, "cell_radius", "cell_radius > 0 required");
    require(c.num_iab >= 0, "num_iab", "num_iab >= 0 required");
    require(c.num_dgnb == 1, "num_dgnb", "exactly one donor is supported (num_dgnb = 1)");
    require(c.array_ue.rows >= 1 && c.array_ue.cols >= 1, "array_ue", "rows, cols >= 1 required");
    require(c.array_bs.rows >= 1 && c.array_bs.cols >= 1, "array_bs", "rows, cols >= 1 required");
    require(c.ue_speed >= 0, "ue_speed", "ue_speed >= 0 required");
    require(c.height_dgnb > 0 && c.height_iab > 0 && c.height_ue > 0, "height", "heights > 0 required");
    require(c.height_blocker >= 0, "height_blocker", "height_blocker >= 0 required");
    require(c.blocker_radius > 0, "blocker_radius", "blocker_radius > 0 required");
    require(c.blocker_density >= 0, "blocker_density", "blocker_density >= 0 required");
    require(c.mc_degree == 1 || c.mc_degree == 2, "mc_degree", "mc_degree in {1, 2} required");
    require(c.file_size > 0, "file_size", "file_size > 0 required");
    require(std::isfinite(c.session_rate_ul) && c.session_rate_ul >= 0, "session_rate_ul",
            "session_rate_ul >= 0 required");
    require(std::isfinite(c.session_rate_dl) && c.session_rate_dl >= 0, "session_rate_dl",
            "session_rate_dl >= 0 required");
    require(std::isfinite(c.sim_duration) && c.sim_duration > 0, "sim_duration", "sim_duration > 0 required");
    require(std::isfinite(c.warmup) && c.warmup >= 0, "warmup", "warmup >= 0 required");
    require(c.warmup < c.sim_duration, "warmup", "warmup < sim_duration required");
    require(c.interference_margin >= 0, "interference_margin", "interference_margin >= 0 required");
    require(c.blockage_extra_loss >= 0, "blockage_extra_loss", "blockage_extra_loss >= 0 required");
    require(!std::isnan(c.rsrp_threshold), "rsrp_threshold", "rsrp_threshold must not be NaN");
    require(std::isfinite(c.scan_period) && c.scan_period > 0, "scan_period", "scan_period > 0 required");
    require(std::isfinite(c.se_cap) && c.se_cap > 0, "se_cap", "se_cap > 0 required");
    require(std::isfinite(c.topology_period) && c.topology_period > 0, "topology_period",
            "topology_period > 0 required");
    require(std::isfinite(c.mobility_tick) && c.mobility_tick > 0, "mobility_tick", "mobility_tick > 0 required");
    require(std::isfinite(c.direction_redraw_period) && c.direction_redraw_period > 0, "direction_redraw_period",
            "direction_redraw_period > 0 required");
    require(std::isfinite(c.switch_delay) && c.switch_delay >= 0, "switch_delay", "switch_delay >= 0 required");
    require(c.guard_symbols >= 0 && c.guard_symbols < 7, "guard_symbols", "0 <= guard_symbols < 7 required");
    require(c.format_update_slots >= 1, "format_update_slots", "format_update_slots >= 1 required");
    require(c.format_clamp_min >= 0 && c.format_clamp_min <= 0.5 && c.format_clamp_max >= 0.5 &&
                c.format_clamp_max <= 1 && c.format_clamp_min + c.format_clamp_max == 1.0,
            "format_clamp", "0 <= format_clamp_min <= 0.5 <= format_clamp_max <= 1, summing to 1, required");

    if (!errs.empty())
        return ValidationResult::failed(std::move(errs));
    return ValidationResult::ok(c);
}

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &f : fields())
            k.push_back(f.name);
        return k;
    }();
    return keys;
}

bool is_config_key(std::string_view key)
{
    const auto &k = config_keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

void set_config_value(Config &cfg, std::string_view key, std::string_view value)
{
    find_field(trim(key)).set(cfg, trim(value));
}

std::string get_config_value(const Config &cfg, std::string_view key) { return find_field(key).get(cfg); }

void apply_config_text(Config &cfg, std::string_view text)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        try {
            set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

Config load_config_file(const std::string &path, const Config &base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Config cfg = base;
    try {
        apply_config_text(cfg, ss.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

void apply_override(Config &cfg, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    set_config_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> config_to_key_values(const Config &cfg)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &f : fields())
        out.emplace_back(f.name, f.get(cfg));
    return out;
}

void write_config(std::ostream &out, const Config &cfg)
{
    for (const auto &[k, v] : config_to_key_values(cfg))
        out << k << " = " << v << '\n';
}

} // namespace iabsim
