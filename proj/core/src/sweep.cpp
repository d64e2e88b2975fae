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


#include "iabsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace iabsim {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> list(std::string_view s)
{
    auto out = split(s, ',');
    out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
    return out;
}

std::string num(double v)
{
    if (std::isnan(v))
        return "";
    return format_double(v);
}

// Keeps free-text fields CSV-safe without quoting.
std::string sanitize(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

const std::vector<std::string> kBlockerDensities{"0.05", "0.1", "0.2", "0.3", "0.4", "0.5"};

SweepRow row_from_report(const SweepPoint &p, const MetricsReport &r)
{
    SweepRow row;
    row.run_id = p.run_id;
    row.series = p.series;
    row.x = p.x;
    row.seed = p.seed;
    row.config = p.config;
    row.ok = !r.insufficient_data && r.conservation_ok;
    if (r.insufficient_data)
        row.error = "insufficient data: no completed sessions after warmup";
    else if (!r.conservation_ok)
        row.error = "byte conservation audit failed";
    row.mean_ue_throughput = r.mean_ue_throughput;
    row.mean_dl_session_throughput = r.mean_dl_session_throughput;
    row.mean_ul_session_throughput = r.mean_ul_session_throughput;
    row.completed_sessions = static_cast<double>(r.completed_sessions);
    row.pending_sessions = static_cast<double>(r.pending_sessions);
    row.switches_blockage = static_cast<double>(r.switches_blockage);
    row.switches_scan = static_cast<double>(r.switches_scan);
    row.mean_relay_queue_bytes = r.mean_relay_queue_bytes;
    row.mean_c_dl = r.mean_c_dl;
    row.mean_hops = r.mean_hops;
    row.blocked_link_fraction = r.blocked_link_fraction;
    row.half_duplex_violations = r.half_duplex_violations;
    row.conservation_ok = r.conservation_ok;
    return row;
}

} // namespace

const std::vector<std::string> &sweep_preset_names()
{
    static const std::vector<std::string> names{"fig3", "fig4", "fig5"};
    return names;
}

bool is_sweep_preset(std::string_view name)
{
    const auto &n = sweep_preset_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

SweepSpec sweep_preset(std::string_view name)
{
    SweepSpec s;
    s.name = std::string(name);
    if (name == "fig3") {
        s.x_param = "session_rate_dl";
        s.x_values = {"0.1", "0.3", "0.5", "0.7", "0.9"};
        s.vary = {{"association_scheme", {"MinHops", "MaxRsrp"}},
                  {"slot_format_policy", {"Static5050", "PF", "WPF"}},
                  {"num_iab", {"3", "7"}}};
        s.base = {{"session_rate_ul", "0.2"},
                  {"connectivity_mode", "SC"},
                  {"beam_config", "AllSingle"}};
    } else if (name == "fig4") {
        s.x_param = "blocker_density";
        s.x_values = kBlockerDensities;
        s.vary = {{"connectivity_mode", {"SC", "MC", "SC_FS", "SC_FS_Scan"}}};
        s.base = {{"session_rate_dl", "0.5"},
                  {"session_rate_ul", "0.5"},
                  {"slot_format_policy", "PF"},
                  {"association_scheme", "MaxRsrp"},
                  {"beam_config", "AllSingle"}};
    } else if (name == "fig5") {
        s.x_param = "blocker_density";
        s.x_values = kBlockerDensities;
        s.vary = {{"beam_config", {"AllSingle", "DgnbMulti", "AllMulti"}},
                  {"association_scheme", {"MinHops", "MaxRsrp"}}};
        s.base = {{"session_rate_dl", "0.5"},
                  {"session_rate_ul", "0.5"},
                  {"slot_format_policy", "PF"},
                  {"connectivity_mode", "SC_FS_Scan"}};
    } else {
        throw ConfigError("unknown sweep preset '" + std::string(name) + "'");
    }
    return s;
}

SweepSpec parse_sweep_spec(std::string_view text)
{
    SweepSpec s;
    s.vary.clear();
    int line_no = 0;
    for (const auto &raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("sweep spec line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "name") {
            s.name = std::string(value);
        } else if (key == "param") {
            s.x_param = std::string(value);
        } else if (key == "values") {
            s.x_values = list(value);
        } else if (key == "seeds") {
            try {
                s.seeds = std::stoi(std::string(value));
            } catch (const std::exception &) {
                throw ConfigError("sweep spec line " + std::to_string(line_no) + ": invalid seeds");
            }
        } else if (key == "first_seed") {
            try {
                s.first_seed = std::stoull(std::string(value));
            } catch (const std::exception &) {
                throw ConfigError("sweep spec line " + std::to_string(line_no) + ": invalid first_seed");
            }
        } else if (key.starts_with("vary.")) {
            s.vary.push_back({key.substr(5), list(value)});
        } else if (key.starts_with("set.")) {
            s.base.emplace_back(key.substr(4), std::string(value));
        } else {
            throw ConfigError("sweep spec line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    validate_sweep_spec(s);
    return s;
}

SweepSpec load_sweep_spec(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open sweep spec '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_spec(ss.str());
}

void validate_sweep_spec(const SweepSpec &spec)
{
    if (!is_config_key(spec.x_param))
        throw ConfigError("swept parameter '" + spec.x_param + "' is not a config field");
    if (spec.x_param == "seed")
        throw ConfigError("seed cannot be swept; use seeds");
    if (spec.x_values.empty())
        throw ConfigError("sweep needs at least one value");
    if (spec.seeds < 1)
        throw ConfigError("sweep needs at least one seed per point");
    for (const auto &axis : spec.vary) {
        if (!is_config_key(axis.key))
            throw ConfigError("varied parameter '" + axis.key + "' is not a config field");
        if (axis.values.empty())
            throw ConfigError("varied parameter '" + axis.key + "' has no values");
    }
    for (const auto &[k, v] : spec.base)
        if (!is_config_key(k))
            throw ConfigError("override '" + k + "' is not a config field");
}

std::vector<SweepPoint> expand_sweep(const SweepSpec &spec, const Config &base)
{
    validate_sweep_spec(spec);
    Config common = base;
    for (const auto &[k, v] : spec.base)
        set_config_value(common, k, v);

    // Mixed-radix enumeration of the vary axes, first axis slowest.
    std::size_t combos = 1;
    for (const auto &axis : spec.vary)
        combos *= axis.values.size();

    std::vector<SweepPoint> points;
    std::size_t id = 0;
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::size_t> digit(spec.vary.size());
        std::size_t rest = c;
        for (std::size_t a = spec.vary.size(); a-- > 0;) {
            digit[a] = rest % spec.vary[a].values.size();
            rest /= spec.vary[a].values.size();
        }
        std::string series;
        for (std::size_t a = 0; a < spec.vary.size(); ++a) {
            if (!series.empty())
                series += ';';
            series += spec.vary[a].key + "=" + spec.vary[a].values[digit[a]];
        }
        if (series.empty())
            series = "all";

        for (const auto &x : spec.x_values) {
            for (int k = 0; k < spec.seeds; ++k) {
                SweepPoint p;
                p.run_id = id++;
                p.series = series;
                p.x = x;
                p.seed = spec.first_seed + static_cast<std::uint64_t>(k);
                p.config = common;
                try {
                    for (std::size_t a = 0; a < spec.vary.size(); ++a)
                        set_config_value(p.config, spec.vary[a].key, spec.vary[a].values[digit[a]]);
                    set_config_value(p.config, spec.x_param, x);
                    p.config.seed = p.seed;
                    const auto v = validate_config(p.config);
                    if (!v)
                        p.error = v.error_summary();
                } catch (const ConfigError &e) {
                    p.error = e.what();
                }
                points.push_back(std::move(p));
            }
        }
    }
    return points;
}

SweepRow aggregate_rows(const std::vector<SweepRow> &seed_rows)
{
    SweepRow mean;
    mean.type = RowType::Mean;
    if (seed_rows.empty())
        return mean;
    mean.run_id = seed_rows.front().run_id;
    mean.series = seed_rows.front().series;
    mean.x = seed_rows.front().x;
    mean.config = seed_rows.front().config;
    mean.seed = 0;

    std::vector<const SweepRow *> ok;
    for (const auto &r : seed_rows) {
        if (r.ok)
            ok.push_back(&r);
        mean.half_duplex_violations += r.half_duplex_violations;
        mean.conservation_ok = mean.conservation_ok && r.conservation_ok;
    }
    mean.n_seeds = static_cast<int>(ok.size());
    mean.ok = !ok.empty();
    if (ok.size() != seed_rows.size())
        mean.error = std::to_string(seed_rows.size() - ok.size()) + " of " + std::to_string(seed_rows.size()) +
                     " seeds failed";
    if (ok.empty()) {
        mean.mean_ue_throughput = std::nan("");
        return mean;
    }

    const auto avg = [&](double SweepRow::*m) {
        double s = 0.0;
        for (const auto *r : ok)
            s += r->*m;
        return s / static_cast<double>(ok.size());
    };
    mean.mean_ue_throughput = avg(&SweepRow::mean_ue_throughput);
    mean.mean_dl_session_throughput = avg(&SweepRow::mean_dl_session_throughput);
    mean.mean_ul_session_throughput = avg(&SweepRow::mean_ul_session_throughput);
    mean.completed_sessions = avg(&SweepRow::completed_sessions);
    mean.pending_sessions = avg(&SweepRow::pending_sessions);
    mean.switches_blockage = avg(&SweepRow::switches_blockage);
    mean.switches_scan = avg(&SweepRow::switches_scan);
    mean.mean_relay_queue_bytes = avg(&SweepRow::mean_relay_queue_bytes);
    mean.mean_c_dl = avg(&SweepRow::mean_c_dl);
    mean.mean_hops = avg(&SweepRow::mean_hops);
    mean.blocked_link_fraction = avg(&SweepRow::blocked_link_fraction);
    if (ok.size() > 1) {
        double ss = 0.0;
        for (const auto *r : ok)
            ss += (r->mean_ue_throughput - mean.mean_ue_throughput) * (r->mean_ue_throughput - mean.mean_ue_throughput);
        mean.mean_ue_throughput_std = std::sqrt(ss / static_cast<double>(ok.size() - 1));
    }
    return mean;
}

SweepResult run_sweep(const SweepSpec &spec, const Config &base, int workers, const SweepProgress &progress)
{
    const auto points = expand_sweep(spec, base);
    std::vector<SweepRow> rows(points.size());

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size())
                return;
            const auto &p = points[i];
            if (!p.error.empty()) {
                rows[i].run_id = p.run_id;
                rows[i].series = p.series;
                rows[i].x = p.x;
                rows[i].seed = p.seed;
                rows[i].config = p.config;
                rows[i].error = p.error;
            } else {
                try {
                    rows[i] = row_from_report(p, run(p.config));
                } catch (const std::exception &e) {
                    rows[i] = SweepRow{};
                    rows[i].run_id = p.run_id;
                    rows[i].series = p.series;
                    rows[i].x = p.x;
                    rows[i].seed = p.seed;
                    rows[i].config = p.config;
                    rows[i].error = e.what();
                }
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(d, points.size());
            }
        }
    };
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n; ++t)
            pool.emplace_back(work);
    }

    SweepResult result;
    result.spec = spec;
    const auto seeds = static_cast<std::size_t>(spec.seeds);
    for (std::size_t g = 0; g < rows.size(); g += seeds) {
        std::vector<SweepRow> group(rows.begin() + static_cast<std::ptrdiff_t>(g),
                                    rows.begin() + static_cast<std::ptrdiff_t>(g + seeds));
        for (const auto &r : group)
            result.rows.push_back(r);
        result.rows.push_back(aggregate_rows(group));
    }
    return result;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result)
{
    out << "row_type,run_id,series,x_param,x,seed,n_seeds,status,mean_ue_throughput,mean_ue_throughput_std,"
           "mean_dl_session_throughput,mean_ul_session_throughput,completed_sessions,pending_sessions,"
           "switches_blockage,switches_scan,mean_relay_queue_bytes,mean_c_dl,mean_hops,blocked_link_fraction,"
           "half_duplex_violations,conservation_ok,error";
    for (const auto &k : config_keys())
        out << ',' << k;
    out << '\n';
    for (const auto &r : result.rows) {
        const bool mean = r.type == RowType::Mean;
        out << (mean ? "mean" : "seed") << ',' << r.run_id << ',' << r.series << ',' << result.spec.x_param << ','
            << r.x << ',' << (mean ? std::string{} : std::to_string(r.seed)) << ',' << r.n_seeds << ','
            << (r.ok ? "ok" : "failed") << ',';
        if (r.ok || mean) {
            out << num(r.mean_ue_throughput) << ',' << num(r.mean_ue_throughput_std) << ','
                << num(r.mean_dl_session_throughput) << ',' << num(r.mean_ul_session_throughput) << ','
                << num(r.completed_sessions) << ',' << num(r.pending_sessions) << ',' << num(r.switches_blockage)
                << ',' << num(r.switches_scan) << ',' << num(r.mean_relay_queue_bytes) << ',' << num(r.mean_c_dl)
                << ',' << num(r.mean_hops) << ',' << num(r.blocked_link_fraction) << ',';
        } else {
            out << ",,,,,,,,,,,,";
        }
        out << r.half_duplex_violations << ',' << (r.conservation_ok ? "true" : "false") << ','
            << sanitize(r.error);
        for (const auto &[k, v] : config_to_key_values(r.config))
            out << ',' << (mean && k == "seed" ? std::string{} : v);
        out << '\n';
    }
}

std::vector<PlotPoint> read_plot_points(std::istream &in, std::vector<std::string> &warnings)
{
    std::vector<PlotPoint> points;
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        warnings.emplace_back("empty sweep input; writing header only");
        return points;
    }
    const auto header = split(line, ',');
    const auto column = [&](std::string_view name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ConfigError("sweep CSV lacks column '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_type = column("row_type");
    const std::size_t c_series = column("series");
    const std::size_t c_x = column("x");
    const std::size_t c_y = column("mean_ue_throughput");
    const std::size_t c_std = column("mean_ue_throughput_std");
    const std::size_t c_status = column("status");

    std::map<std::string, std::set<double>> xs_by_series;
    std::set<double> all_x;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() < header.size())
            throw ConfigError("malformed sweep CSV row: " + line);
        if (f[c_type] != "mean")
            continue;
        if (f[c_status] != "ok" || f[c_y].empty()) {
            warnings.push_back("series '" + f[c_series] + "' has no data at x=" + f[c_x]);
            continue;
        }
        PlotPoint p;
        p.series = f[c_series];
        try {
            p.x = std::stod(f[c_x]);
            p.y = std::stod(f[c_y]);
            p.y_stddev = f[c_std].empty() ? 0.0 : std::stod(f[c_std]);
        } catch (const std::exception &) {
            throw ConfigError("non-numeric value in sweep CSV row: " + line);
        }
        xs_by_series[p.series].insert(p.x);
        all_x.insert(p.x);
        points.push_back(std::move(p));
    }
    if (points.empty())
        warnings.emplace_back("no plottable rows in sweep input; writing header only");
    for (const auto &[series, xs] : xs_by_series) {
        for (double x : all_x)
            if (!xs.contains(x))
                warnings.push_back("series '" + series + "' is missing x=" + format_double(x));
    }
    return points;
}

void write_plot_data(std::ostream &out, const std::vector<PlotPoint> &points)
{
    out << "series,x,y,y_stddev\n";
    for (const auto &p : points)
        out << p.series << ',' << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.y_stddev)
            << '\n';
}

} // namespace iabsim
