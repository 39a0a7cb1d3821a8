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

#ifndef LTECHEST_SCENARIO_CONFIG_HPP
#define LTECHEST_SCENARIO_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltechest/channel.hpp"
#include "ltechest/estimators.hpp"
#include "ltechest/grid.hpp"
#include "ltechest/svr.hpp"

namespace ltechest
{

struct ScenarioConfig
{
    double bandwidth_mhz = 5.0;
    OfdmConfig ofdm = lte_config(5.0);
    double speed_kmh = 350.0;
    double carrier_hz = 2.15e9;
    std::vector<double> snr_list{10.0, 20.0, 30.0};
    std::optional<std::vector<double>> sir_list; ///< nullopt disables impulse noise
    std::vector<double> p_list{0.0};
    std::vector<Method> estimators{Method::ls, Method::decision_feedback, Method::svr};
    SvrHyperparams svr = SvrHyperparams::defaults_for_spacing(6);
    std::size_t frames_per_point = 100;
    std::uint64_t master_seed = 1;
    PowerDelayProfile profile = PowerDelayProfile::eva();
    std::size_t df_reanchor_period = 0;
    std::size_t threads = 0; ///< 0 selects hardware concurrency

    double doppler_hz() const { return max_doppler_hz(speed_kmh, carrier_hz); }

    /// Throws std::invalid_argument, including when the cyclic prefix is
    /// shorter than the quantized maximum path delay.
    void validate() const;
};

/// 5 MHz, N = 512, 16-QAM, 350 km/h, 2.15 GHz, EVA.
ScenarioConfig paper_table3_preset();

/// Named presets; currently "paper-table3".
ScenarioConfig named_preset(std::string_view name);

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Applies `key = value` lines on top of `base`. `#` starts a comment.
/// Unknown keys and malformed values throw ConfigError naming the line.
ScenarioConfig parse_config(std::istream &in, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path &path, ScenarioConfig base = {});

/// Applies one key/value pair.
void apply_config_value(ScenarioConfig &config, std::string_view key, std::string_view value);

/// Every accepted key, in documentation order.
const std::vector<std::string> &config_keys();

std::vector<Method> parse_method_list(std::string_view list);

} // namespace ltechest

#endif
