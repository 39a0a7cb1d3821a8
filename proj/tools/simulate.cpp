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

// simulate: Monte Carlo BER sweep driver.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ltechest/channel.hpp"
#include "ltechest/harness.hpp"
#include "ltechest/scenario_config.hpp"
#include "ltechest/seeding.hpp"

namespace
{

void dump_first_channel(const ltechest::ScenarioConfig &config, const std::string &path)
{
    const auto points = ltechest::sweep_points(config);
    const std::uint64_t frame_seed = ltechest::derive_frame_seed(config.master_seed, points.front().index, 0);
    const ltechest::ChannelRealization channel = ltechest::generate_channel(
        config.profile, config.doppler_hz(), config.ofdm.frame_length(), config.ofdm.sampling_rate_hz,
        ltechest::stream_seed(frame_seed, ltechest::SeedStream::channel));

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    ltechest::write_channel_csv(out, ltechest::true_frequency_response_frame(channel, config.ofdm));
    if (!out.flush())
        throw std::runtime_error("failed writing " + path);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"LTE downlink channel-estimation BER simulator"};

    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> preset;
    std::optional<std::string> estimators;
    std::optional<std::string> dump_path;
    std::optional<std::size_t> threads;

    app.add_option("--config", config_path, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--preset", preset, "Named base scenario (paper-table3)");
    app.add_option("--estimators", estimators, "Comma-separated subset of ls,df,svr");
    app.add_option("--dump-channel", dump_path, "Write the true response of the first frame as CSV");
    app.add_option("--threads", threads, "Worker threads per sweep point (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    if (!config_path && !preset)
    {
        std::cerr << "error: one of --config or --preset is required\n";
        return 2;
    }

    try
    {
        ltechest::ScenarioConfig config = preset ? ltechest::named_preset(*preset) : ltechest::ScenarioConfig{};
        if (config_path)
            config = ltechest::load_config(*config_path, config);
        if (seed)
            config.master_seed = *seed;
        if (estimators)
            config.estimators = ltechest::parse_method_list(*estimators);
        if (threads)
            config.threads = *threads;
        config.validate();

        if (dump_path)
            dump_first_channel(config, *dump_path);

        if (out_path)
        {
            std::ofstream out(*out_path);
            if (!out)
                throw std::runtime_error("cannot open " + *out_path + " for writing");
            ltechest::run_scenario(config, &out);
        }
        else
        {
            ltechest::run_scenario(config, &std::cout);
        }
    }
    catch (const std::exception &error)
    {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
