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
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "ltechest/channel.hpp"

namespace ltechest
{
namespace
{

constexpr double kSpeedOfLight = 299792458.0;

// Phasors are advanced by complex rotation and re-anchored exactly at this
// period so rounding drift stays at the 1e-13 level.
constexpr std::size_t kReanchorPeriod = 1024;

} // namespace

PowerDelayProfile::PowerDelayProfile(std::vector<PathTap> taps) : taps_(std::move(taps))
{
    if (taps_.empty())
        throw std::invalid_argument("power delay profile has no taps");
    if (taps_.front().delay_ns != 0.0)
        throw std::invalid_argument("first tap delay must be 0 ns");
    for (std::size_t i = 1; i < taps_.size(); ++i)
        if (!(taps_[i].delay_ns > taps_[i - 1].delay_ns))
            throw std::invalid_argument("tap delays must be strictly increasing");
    for (const PathTap &tap : taps_)
        if (!std::isfinite(tap.power_db))
            throw std::invalid_argument("tap power must be finite");
}

PowerDelayProfile PowerDelayProfile::eva()
{
    return PowerDelayProfile({
        {0.0, 0.0},
        {30.0, -1.5},
        {150.0, -1.4},
        {310.0, -3.6},
        {370.0, -0.6},
        {710.0, -9.1},
        {1090.0, -7.0},
        {1730.0, -12.0},
        {2510.0, -16.9},
    });
}

std::vector<double> PowerDelayProfile::normalized_powers() const
{
    std::vector<double> powers;
    powers.reserve(taps_.size());
    double total = 0.0;
    for (const PathTap &tap : taps_)
    {
        powers.push_back(std::pow(10.0, tap.power_db / 10.0));
        total += powers.back();
    }
    for (double &p : powers)
        p /= total;
    return powers;
}

std::vector<SampledTap> quantize_profile(const PowerDelayProfile &profile, double sampling_rate_hz)
{
    if (!(sampling_rate_hz > 0.0))
        throw std::invalid_argument("sampling rate must be positive");
    const std::vector<double> powers = profile.normalized_powers();
    std::map<std::size_t, double> merged;
    for (std::size_t i = 0; i < powers.size(); ++i)
    {
        const auto delay =
            static_cast<std::size_t>(std::llround(profile.taps()[i].delay_ns * 1e-9 * sampling_rate_hz));
        merged[delay] += powers[i];
    }
    std::vector<SampledTap> taps;
    taps.reserve(merged.size());
    for (const auto &[delay, power] : merged)
        taps.push_back({delay, power});
    return taps;
}

double max_doppler_hz(double speed_kmh, double carrier_hz)
{
    return speed_kmh / 3.6 * carrier_hz / kSpeedOfLight;
}

std::size_t ChannelRealization::max_delay_samples() const
{
    return tap_delays_samples.empty() ? 0 : *std::max_element(tap_delays_samples.begin(), tap_delays_samples.end());
}

ChannelRealization generate_channel(const PowerDelayProfile &profile, double doppler_hz,
                                    std::size_t num_samples, double sampling_rate_hz, std::uint64_t seed,
                                    std::size_t sinusoids)
{
    if (!(doppler_hz >= 0.0))
        throw std::invalid_argument("doppler must be nonnegative");
    if (num_samples == 0)
        throw std::invalid_argument("channel needs at least one sample");
    if (sinusoids == 0)
        throw std::invalid_argument("sum-of-sinusoids needs at least one sinusoid");

    const std::vector<SampledTap> taps = quantize_profile(profile, sampling_rate_hz);

    ChannelRealization realization;
    realization.doppler_hz = doppler_hz;
    realization.sampling_rate_hz = sampling_rate_hz;
    realization.tap_gains.resize(taps.size());
    realization.tap_delays_samples.reserve(taps.size());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    const std::size_t m = sinusoids;
    std::vector<double> omega(m), phase(m), re(m), im(m), rot_re(m), rot_im(m);

    for (std::size_t l = 0; l < taps.size(); ++l)
    {
        realization.tap_delays_samples.push_back(taps[l].delay_samples);
        const double amplitude = std::sqrt(taps[l].power / static_cast<double>(m));

        // Stratified arrival angles give the classical spectrum in expectation.
        for (std::size_t n = 0; n < m; ++n)
        {
            const double alpha = two_pi * (static_cast<double>(n) + unit(rng)) / static_cast<double>(m);
            omega[n] = two_pi * doppler_hz * std::cos(alpha) / sampling_rate_hz;
            phase[n] = two_pi * unit(rng);
            rot_re[n] = std::cos(omega[n]);
            rot_im[n] = std::sin(omega[n]);
        }

        std::vector<Complex> &gains = realization.tap_gains[l];
        gains.resize(num_samples);
        for (std::size_t block = 0; block < num_samples; block += kReanchorPeriod)
        {
            const auto t0 = static_cast<double>(block);
            for (std::size_t n = 0; n < m; ++n)
            {
                const double angle = std::fmod(omega[n] * t0, two_pi) + phase[n];
                re[n] = amplitude * std::cos(angle);
                im[n] = amplitude * std::sin(angle);
            }
            const std::size_t end = std::min(num_samples, block + kReanchorPeriod);
            for (std::size_t t = block; t < end; ++t)
            {
                double sum_re = 0.0;
                double sum_im = 0.0;
                for (std::size_t n = 0; n < m; ++n)
                {
                    sum_re += re[n];
                    sum_im += im[n];
                }
                gains[t] = {sum_re, sum_im};
                for (std::size_t n = 0; n < m; ++n)
                {
                    const double next_re = re[n] * rot_re[n] - im[n] * rot_im[n];
                    const double next_im = re[n] * rot_im[n] + im[n] * rot_re[n];
                    re[n] = next_re;
                    im[n] = next_im;
                }
            }
        }
    }
    return realization;
}

ChannelRealization static_channel(std::span<const Complex> gains, std::span<const std::size_t> delays,
                                  std::size_t num_samples, double sampling_rate_hz)
{
    if (gains.empty() || gains.size() != delays.size())
        throw std::invalid_argument("static channel needs matching, nonempty gain and delay lists");
    if (num_samples == 0)
        throw std::invalid_argument("channel needs at least one sample");
    ChannelRealization realization;
    realization.sampling_rate_hz = sampling_rate_hz;
    realization.tap_delays_samples.assign(delays.begin(), delays.end());
    for (const Complex &g : gains)
        realization.tap_gains.emplace_back(num_samples, g);
    return realization;
}

TimeSignal apply_channel(const TimeSignal &tx, const ChannelRealization &realization)
{
    if (realization.tap_count() == 0)
        throw std::invalid_argument("channel realization has no taps");
    if (realization.num_samples() < tx.samples.size())
        throw std::invalid_argument("channel realization covers " + std::to_string(realization.num_samples()) +
                                    " samples, signal has " + std::to_string(tx.samples.size()));

    const std::size_t length = tx.samples.size();
    std::vector<double> out_re(length, 0.0), out_im(length, 0.0);
    for (std::size_t l = 0; l < realization.tap_count(); ++l)
    {
        const std::size_t d = realization.tap_delays_samples[l];
        const std::vector<Complex> &gain = realization.tap_gains[l];
        for (std::size_t t = d; t < length; ++t)
        {
            const Complex g = gain[t];
            const Complex x = tx.samples[t - d];
            out_re[t] += g.real() * x.real() - g.imag() * x.imag();
            out_im[t] += g.real() * x.imag() + g.imag() * x.real();
        }
    }

    TimeSignal rx;
    rx.sampling_rate_hz = tx.sampling_rate_hz;
    rx.samples.resize(length);
    for (std::size_t t = 0; t < length; ++t)
        rx.samples[t] = {out_re[t], out_im[t]};
    return rx;
}

std::vector<Complex> true_frequency_response(const ChannelRealization &realization, const OfdmConfig &config,
                                             std::size_t symbol_index)
{
    if (symbol_index >= config.symbols_per_frame)
        throw std::out_of_range("symbol index " + std::to_string(symbol_index) + " outside the frame");
    const std::size_t t = symbol_index * config.symbol_length() + config.cp_samples + config.fft_size / 2;
    if (t >= realization.num_samples())
        throw std::out_of_range("channel realization does not cover symbol " + std::to_string(symbol_index));

    const double n = static_cast<double>(config.fft_size);
    std::vector<Complex> response(config.occupied_subcarriers, Complex{});
    for (std::size_t l = 0; l < realization.tap_count(); ++l)
    {
        const Complex gain = realization.tap_gains[l][t];
        const auto delay = static_cast<double>(realization.tap_delays_samples[l]);
        for (std::size_t q = 0; q < response.size(); ++q)
        {
            const double angle = -2.0 * std::numbers::pi * config.fft_bin(q) * delay / n;
            response[q] += gain * Complex(std::cos(angle), std::sin(angle));
        }
    }
    return response;
}

ComplexGrid true_frequency_response_frame(const ChannelRealization &realization, const OfdmConfig &config)
{
    ComplexGrid grid(static_cast<Eigen::Index>(config.symbols_per_frame),
                     static_cast<Eigen::Index>(config.occupied_subcarriers));
    for (std::size_t s = 0; s < config.symbols_per_frame; ++s)
    {
        const std::vector<Complex> row = true_frequency_response(realization, config, s);
        std::copy(row.begin(), row.end(), row_span(grid, static_cast<Eigen::Index>(s)).begin());
    }
    return grid;
}

void write_channel_csv(std::ostream &out, const ComplexGrid &response)
{
    out << "symbol_index,subcarrier,magnitude,phase\n";
    char line[128];
    for (Eigen::Index s = 0; s < response.rows(); ++s)
    {
        for (Eigen::Index k = 0; k < response.cols(); ++k)
        {
            const Complex h = response(s, k);
            std::snprintf(line, sizeof line, "%td,%td,%.9g,%.9g\n", s, k, std::abs(h), std::arg(h));
            out << line;
        }
    }
}

} // namespace ltechest
