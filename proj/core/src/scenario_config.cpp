// SPDX-License-Identifier: Apache-2.0
//
// ltechest: pilot-aided OFDM channel estimation for LTE downlink links
// Copyright (C) 2026 The ltechest authors
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

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <string>

#include "ltechest/scenario_config.hpp"

namespace ltechest
{
namespace
{

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view text)
{
    std::vector<std::string_view> items;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        const std::string_view item = trim(text.substr(start, end - start));
        if (!item.empty())
            items.push_back(item);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return items;
}

double parse_double(std::string_view text)
{
    text = trim(text);
    if (text == "inf" || text == "+inf")
        return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || std::isnan(value))
        throw ConfigError("expected a number, got '" + std::string(text) + "'");
    return value;
}

std::uint64_t parse_unsigned(std::string_view text)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        throw ConfigError("expected a nonnegative integer, got '" + std::string(text) + "'");
    return value;
}

std::vector<double> parse_double_list(std::string_view text)
{
    std::vector<double> values;
    for (std::string_view item : split_list(text))
        values.push_back(parse_double(item));
    if (values.empty())
        throw ConfigError("expected a comma-separated list of numbers");
    return values;
}

PowerDelayProfile parse_taps(std::string_view text)
{
    std::vector<PathTap> taps;
    for (std::string_view item : split_list(text))
    {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError("tap '" + std::string(item) + "' is not delay_ns:power_db");
        taps.push_back({parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))});
    }
    try
    {
        return PowerDelayProfile(std::move(taps));
    }
    catch (const std::invalid_argument &error)
    {
        throw ConfigError(error.what());
    }
}

using Setter = std::function<void(ScenarioConfig &, std::string_view)>;

const std::vector<std::pair<std::string, Setter>> &setters()
{
    static const std::vector<std::pair<std::string, Setter>> table{
        {"preset", [](ScenarioConfig &c, std::string_view v) { c = named_preset(trim(v)); }},
        {"bandwidth_mhz",
         [](ScenarioConfig &c, std::string_view v) {
             const double bw = parse_double(v);
             OfdmConfig row;
             try
             {
                 row = lte_config(bw);
             }
             catch (const std::invalid_argument &error)
             {
                 throw ConfigError(error.what());
             }
             c.bandwidth_mhz = bw;
             c.ofdm.fft_size = row.fft_size;
             c.ofdm.sampling_rate_hz = row.sampling_rate_hz;
             c.ofdm.occupied_subcarriers = row.occupied_subcarriers;
             c.ofdm.cp_samples = row.cp_samples;
             c.ofdm.subcarrier_spacing_hz = row.subcarrier_spacing_hz;
         }},
        {"fft_size", [](ScenarioConfig &c, std::string_view v) { c.ofdm.fft_size = parse_unsigned(v); }},
        {"occupied_subcarriers",
         [](ScenarioConfig &c, std::string_view v) { c.ofdm.occupied_subcarriers = parse_unsigned(v); }},
        {"cp_samples", [](ScenarioConfig &c, std::string_view v) { c.ofdm.cp_samples = parse_unsigned(v); }},
        {"subcarrier_spacing_hz",
         [](ScenarioConfig &c, std::string_view v) { c.ofdm.subcarrier_spacing_hz = parse_double(v); }},
        {"sampling_rate_hz", [](ScenarioConfig &c, std::string_view v) { c.ofdm.sampling_rate_hz = parse_double(v); }},
        {"pilot_spacing", [](ScenarioConfig &c, std::string_view v) { c.ofdm.pilot_spacing = parse_unsigned(v); }},
        {"symbols_per_frame",
         [](ScenarioConfig &c, std::string_view v) { c.ofdm.symbols_per_frame = parse_unsigned(v); }},
        {"modulation_order",
         [](ScenarioConfig &c, std::string_view v) {
             c.ofdm.modulation_order = static_cast<unsigned>(parse_unsigned(v));
         }},
        {"pilot_seed", [](ScenarioConfig &c, std::string_view v) { c.ofdm.pilot_seed = parse_unsigned(v); }},
        {"speed_kmh", [](ScenarioConfig &c, std::string_view v) { c.speed_kmh = parse_double(v); }},
        {"carrier_hz", [](ScenarioConfig &c, std::string_view v) { c.carrier_hz = parse_double(v); }},
        {"snr_list", [](ScenarioConfig &c, std::string_view v) { c.snr_list = parse_double_list(v); }},
        {"sir_list",
         [](ScenarioConfig &c, std::string_view v) {
             const std::string_view t = trim(v);
             if (t == "none" || t.empty())
                 c.sir_list.reset();
             else
                 c.sir_list = parse_double_list(t);
         }},
        {"p_list", [](ScenarioConfig &c, std::string_view v) { c.p_list = parse_double_list(v); }},
        {"estimators", [](ScenarioConfig &c, std::string_view v) { c.estimators = parse_method_list(v); }},
        {"frames_per_point", [](ScenarioConfig &c, std::string_view v) { c.frames_per_point = parse_unsigned(v); }},
        {"master_seed", [](ScenarioConfig &c, std::string_view v) { c.master_seed = parse_unsigned(v); }},
        {"df_reanchor_period",
         [](ScenarioConfig &c, std::string_view v) { c.df_reanchor_period = parse_unsigned(v); }},
        {"threads", [](ScenarioConfig &c, std::string_view v) { c.threads = parse_unsigned(v); }},
        {"channel_profile",
         [](ScenarioConfig &c, std::string_view v) {
             if (trim(v) != "eva")
                 throw ConfigError("unknown channel profile '" + std::string(trim(v)) +
                                   "' (use eva, or channel_taps for a custom table)");
             c.profile = PowerDelayProfile::eva();
         }},
        {"channel_taps", [](ScenarioConfig &c, std::string_view v) { c.profile = parse_taps(v); }},
        {"svr_epsilon", [](ScenarioConfig &c, std::string_view v) { c.svr.epsilon = parse_double(v); }},
        {"svr_gamma", [](ScenarioConfig &c, std::string_view v) { c.svr.gamma = parse_double(v); }},
        {"svr_c", [](ScenarioConfig &c, std::string_view v) { c.svr.c = parse_double(v); }},
        {"svr_kernel_sigma", [](ScenarioConfig &c, std::string_view v) { c.svr.kernel_sigma = parse_double(v); }},
        {"svr_solver_tolerance",
         [](ScenarioConfig &c, std::string_view v) { c.svr.solver_tolerance = parse_double(v); }},
        {"svr_max_iterations", [](ScenarioConfig &c, std::string_view v) { c.svr.max_iterations = parse_unsigned(v); }},
        {"svr_bias",
         [](ScenarioConfig &c, std::string_view v) {
             const std::string_view t = trim(v);
             if (t == "none")
                 c.svr.bias = BiasMode::none;
             else if (t == "mean_residual")
                 c.svr.bias = BiasMode::mean_residual;
             else
                 throw ConfigError("svr_bias must be none or mean_residual");
         }},
    };
    return table;
}

} // namespace

void ScenarioConfig::validate() const
{
    ofdm.validate();
    svr.validate();
    if (frames_per_point < 1)
        throw std::invalid_argument("frames_per_point must be at least 1");
    if (!(speed_kmh >= 0.0))
        throw std::invalid_argument("speed must be nonnegative");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    if (snr_list.empty())
        throw std::invalid_argument("snr_list is empty");
    for (double snr : snr_list)
        if (std::isnan(snr))
            throw std::invalid_argument("SNR values must be numbers");
    if (sir_list)
    {
        if (sir_list->empty())
            throw std::invalid_argument("sir_list is empty; use none to disable impulse noise");
        if (p_list.empty())
            throw std::invalid_argument("p_list is empty");
    }
    for (double p : p_list)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("impulse probabilities must lie in [0, 1]");

    std::size_t max_delay = 0;
    for (const SampledTap &tap : quantize_profile(profile, ofdm.sampling_rate_hz))
        max_delay = std::max(max_delay, tap.delay_samples);
    if (ofdm.cp_samples < max_delay)
        throw std::invalid_argument("cyclic prefix (" + std::to_string(ofdm.cp_samples) +
                                    " samples) is shorter than the maximum path delay (" +
                                    std::to_string(max_delay) + " samples)");
}

ScenarioConfig paper_table3_preset()
{
    ScenarioConfig config;
    config.bandwidth_mhz = 5.0;
    config.ofdm = lte_config(5.0);
    config.ofdm.modulation_order = 16;
    config.ofdm.pilot_spacing = 6;
    config.ofdm.symbols_per_frame = 140;
    config.speed_kmh = 350.0;
    config.carrier_hz = 2.15e9;
    config.profile = PowerDelayProfile::eva();
    config.svr = SvrHyperparams::defaults_for_spacing(config.ofdm.pilot_spacing);
    return config;
}

ScenarioConfig named_preset(std::string_view name)
{
    if (name == "paper-table3")
        return paper_table3_preset();
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<Method> parse_method_list(std::string_view list)
{
    std::vector<Method> methods;
    for (std::string_view item : split_list(list))
    {
        try
        {
            methods.push_back(parse_method(item));
        }
        catch (const std::invalid_argument &error)
        {
            throw ConfigError(error.what());
        }
    }
    return methods;
}

void apply_config_value(ScenarioConfig &config, std::string_view key, std::string_view value)
{
    for (const auto &[name, setter] : setters())
    {
        if (name == key)
        {
            setter(config, value);
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> names;
        for (const auto &entry : setters())
            names.push_back(entry.first);
        return names;
    }();
    return keys;
}

ScenarioConfig parse_config(std::istream &in, ScenarioConfig base)
{
    ScenarioConfig config = std::move(base);
    bool sigma_given = false;
    bool spacing_given = false;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line))
    {
        ++line_number;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos)
            text = text.substr(0, hash);
        text = trim(text);
        if (text.empty())
            continue;
        const auto equals = text.find('=');
        if (equals == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
        const std::string_view key = trim(text.substr(0, equals));
        const std::string_view value = trim(text.substr(equals + 1));
        try
        {
            apply_config_value(config, key, value);
        }
        catch (const ConfigError &error)
        {
            throw ConfigError("line " + std::to_string(line_number) + ": " + error.what());
        }
        sigma_given = sigma_given || key == "svr_kernel_sigma";
        spacing_given = spacing_given || key == "pilot_spacing";
    }
    // The kernel width follows the pilot spacing unless set explicitly.
    if (spacing_given && !sigma_given)
        config.svr.kernel_sigma = 2.0 * static_cast<double>(config.ofdm.pilot_spacing);
    return config;
}

ScenarioConfig load_config(const std::filesystem::path &path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

} // namespace ltechest
