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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "ltechest/channel.hpp"
#include "ltechest/harness.hpp"
#include "ltechest/seeding.hpp"

namespace ltechest
{
namespace
{

std::string format_double(double value)
{
    if (std::isinf(value))
        return value > 0.0 ? "inf" : "-inf";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.9g", value);
    return buffer;
}

Bits random_bits(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Bits bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i)
    {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1U);
    }
    return bits;
}

struct FrameOutcome
{
    std::vector<std::size_t> errors;
    std::vector<double> error_power;
    std::vector<bool> failed;
    double oracle_power = 0.0;
};

// Runs body(i) for i in [0, count) on up to `threads` workers; 0 means hardware concurrency.
template <typename Body> void parallel_for(std::size_t count, std::size_t threads, Body body)
{
    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < threads; ++t)
    {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread &worker : workers)
        worker.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

std::size_t bit_errors(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits)
{
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("bit sequences differ in length (" + std::to_string(tx_bits.size()) + " vs " +
                                    std::to_string(rx_bits.size()) + ")");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        errors += (tx_bits[i] != 0) != (rx_bits[i] != 0) ? 1 : 0;
    return errors;
}

double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits)
{
    const std::size_t errors = bit_errors(tx_bits, rx_bits);
    if (tx_bits.empty())
        throw std::invalid_argument("BER of an empty bit sequence");
    return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

double channel_mse_db(const ComplexGrid &estimate, const ComplexGrid &oracle)
{
    if (estimate.rows() != oracle.rows() || estimate.cols() != oracle.cols())
        throw std::invalid_argument("estimate and oracle grids differ in shape");
    const double reference = oracle.squaredNorm();
    if (!(reference > 0.0))
        throw std::invalid_argument("oracle channel has zero power");
    const double error = (estimate - oracle).squaredNorm();
    if (error == 0.0)
        return kMseFloorDb;
    return std::max(kMseFloorDb, 10.0 * std::log10(error / reference));
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig &config)
{
    std::vector<SweepPoint> points;
    for (double snr : config.snr_list)
    {
        if (!config.sir_list)
        {
            points.push_back({points.size(), snr, std::nullopt, 0.0});
            continue;
        }
        for (double sir : *config.sir_list)
            for (double p : config.p_list)
                points.push_back({points.size(), snr, sir, p});
    }
    return points;
}

SimulatedFrame simulate_frame(const ScenarioConfig &config, const SweepPoint &point, std::uint64_t frame_seed)
{
    const OfdmConfig &ofdm = config.ofdm;
    SimulatedFrame frame;
    frame.tx_data_bits = random_bits(ofdm.data_bits_per_frame(), stream_seed(frame_seed, SeedStream::bits));
    const ResourceGrid grid = build_resource_grid(ofdm, modulate_bits(frame.tx_data_bits, ofdm));
    const TimeSignal tx = modulate_frame(grid.symbols, ofdm);

    const ChannelRealization channel =
        generate_channel(config.profile, config.doppler_hz(), tx.samples.size(), ofdm.sampling_rate_hz,
                         stream_seed(frame_seed, SeedStream::channel));
    const TimeSignal faded = apply_channel(tx, channel);
    const TimeSignal noisy = add_noise(faded, NoiseSpec{point.snr_db, point.sir_db, point.p, frame_seed});

    frame.received = demodulate_frame(noisy, ofdm);
    frame.oracle = true_frequency_response_frame(channel, ofdm);
    return frame;
}

ChannelEstimate estimate_channel(const ScenarioConfig &config, Method method, const ComplexGrid &received)
{
    switch (method)
    {
    case Method::ls:
        return ls_estimate_frame(received, config.ofdm);
    case Method::decision_feedback:
        return decision_feedback_estimate(received, config.ofdm, {config.df_reanchor_period});
    case Method::svr:
        return svr_estimate_frame(received, config.ofdm, config.svr);
    }
    throw std::invalid_argument("unknown estimator");
}

std::size_t count_data_bit_errors(const ScenarioConfig &config, const SimulatedFrame &frame,
                                  const ComplexGrid &estimate)
{
    const std::vector<Complex> y = extract_data_cells(frame.received, config.ofdm);
    const std::vector<Complex> h = extract_data_cells(estimate, config.ofdm);
    const EqualizerOutput out = equalize_and_demap(y, h, config.ofdm);
    return bit_errors(frame.tx_data_bits, out.bits);
}

std::vector<BerRecord> run_point(const ScenarioConfig &config, const SweepPoint &point,
                                 std::span<const Method> methods)
{
    config.validate();
    const std::size_t frames = config.frames_per_point;
    std::vector<FrameOutcome> outcomes(frames);

    parallel_for(frames, config.threads, [&](std::size_t f) {
        const SimulatedFrame frame = simulate_frame(config, point, derive_frame_seed(config.master_seed, point.index, f));
        FrameOutcome &outcome = outcomes[f];
        outcome.oracle_power = frame.oracle.squaredNorm();
        for (Method method : methods)
        {
            try
            {
                const ChannelEstimate estimate = estimate_channel(config, method, frame.received);
                outcome.errors.push_back(count_data_bit_errors(config, frame, estimate.h_hat));
                outcome.error_power.push_back((estimate.h_hat - frame.oracle).squaredNorm());
                outcome.failed.push_back(false);
            }
            catch (const EstimationError &error)
            {
                outcome.errors.push_back(0);
                outcome.error_power.push_back(0.0);
                outcome.failed.push_back(true);
                std::cerr << "warning: " << method_name(method) << " failed on frame " << f << ": " << error.what()
                          << '\n';
            }
        }
    });

    const std::size_t bits_per_frame = config.ofdm.data_bits_per_frame();
    std::vector<BerRecord> records;
    for (std::size_t i = 0; i < methods.size(); ++i)
    {
        BerRecord record;
        record.method = methods[i];
        record.snr_db = point.snr_db;
        record.sir_db = point.sir_db;
        record.p = point.p;
        record.speed_kmh = config.speed_kmh;
        record.seed = config.master_seed;
        double error_power = 0.0;
        double oracle_power = 0.0;
        for (const FrameOutcome &outcome : outcomes)
        {
            if (outcome.failed[i])
            {
                ++record.failed_frames;
                continue;
            }
            ++record.frames;
            record.bit_errors += outcome.errors[i];
            record.frame_bit_errors.push_back(outcome.errors[i]);
            error_power += outcome.error_power[i];
            oracle_power += outcome.oracle_power;
        }
        record.total_bits = record.frames * bits_per_frame;
        if (record.frames == 0)
        {
            record.ber = std::nan("");
            record.channel_mse_db = std::nan("");
        }
        else
        {
            record.ber = static_cast<double>(record.bit_errors) / static_cast<double>(record.total_bits);
            record.channel_mse_db =
                error_power == 0.0 ? kMseFloorDb : std::max(kMseFloorDb, 10.0 * std::log10(error_power / oracle_power));
        }
        records.push_back(std::move(record));
    }
    return records;
}

BerRecord run_point(const ScenarioConfig &config, const SweepPoint &point, Method method)
{
    const Method methods[] = {method};
    return run_point(config, point, methods).front();
}

void write_csv_header(std::ostream &out)
{
    out << kCsvHeader << '\n';
}

void write_csv_row(std::ostream &out, const BerRecord &record)
{
    out << method_name(record.method) << ',' << format_double(record.snr_db) << ','
        << (record.sir_db ? format_double(*record.sir_db) : std::string()) << ',' << format_double(record.p) << ','
        << format_double(record.speed_kmh) << ',' << record.frames << ',' << record.total_bits << ','
        << record.bit_errors << ',' << format_double(record.ber) << ',' << format_double(record.channel_mse_db) << ','
        << record.seed << '\n';
}

std::vector<BerRecord> run_scenario(const ScenarioConfig &config, std::ostream *csv)
{
    config.validate();
    std::vector<BerRecord> records;
    if (csv)
    {
        write_csv_header(*csv);
        csv->flush();
        if (!*csv)
            throw std::runtime_error("failed to write CSV header");
    }
    if (config.estimators.empty())
        return records;

    for (const SweepPoint &point : sweep_points(config))
    {
        std::vector<BerRecord> batch = run_point(config, point, config.estimators);
        if (csv)
        {
            for (const BerRecord &record : batch)
                write_csv_row(*csv, record);
            csv->flush();
            if (!*csv)
                throw std::runtime_error("failed to write CSV rows for sweep point " + std::to_string(point.index));
        }
        records.insert(records.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    }
    return records;
}

} // namespace ltechest
