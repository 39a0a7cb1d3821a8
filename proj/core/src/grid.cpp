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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "ltechest/grid.hpp"
#include "ltechest/seeding.hpp"

namespace ltechest
{
namespace
{

constexpr std::array<LtePreset, 6> kLtePresets{{
    {1.25, 128, 1.92e6, 76},
    {2.5, 256, 3.84e6, 151},
    {5.0, 512, 7.68e6, 301},
    {10.0, 1024, 15.36e6, 601},
    {15.0, 1536, 23.04e6, 901},
    {20.0, 2048, 30.72e6, 1201},
}};

Eigen::FFT<double> &thread_fft()
{
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

void require(bool condition, const char *message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

} // namespace

void OfdmConfig::validate() const
{
    require(fft_size >= 2, "fft_size must be at least 2");
    require(occupied_subcarriers >= 1, "occupied_subcarriers must be positive");
    require(occupied_subcarriers < fft_size, "occupied_subcarriers must leave the DC bin free (< fft_size)");
    require(pilot_spacing >= 1, "pilot_spacing must be positive");
    require(symbols_per_frame >= 1, "symbols_per_frame must be positive");
    require(sampling_rate_hz > 0.0, "sampling_rate_hz must be positive");
    require(subcarrier_spacing_hz > 0.0, "subcarrier_spacing_hz must be positive");
    require(modulation_order == 4 || modulation_order == 16 || modulation_order == 64,
            "modulation_order must be 4, 16 or 64");
    if (pilot_count() < 2)
        throw std::invalid_argument("comb needs at least 2 pilots, got " + std::to_string(pilot_count()) +
                                    " (occupied " + std::to_string(occupied_subcarriers) + ", spacing " +
                                    std::to_string(pilot_spacing) + ")");
}

std::size_t OfdmConfig::pilot_count() const
{
    return (occupied_subcarriers + pilot_spacing - 1) / pilot_spacing;
}

std::size_t OfdmConfig::bits_per_symbol() const
{
    switch (modulation_order)
    {
    case 4:
        return 2;
    case 16:
        return 4;
    case 64:
        return 6;
    default:
        throw std::invalid_argument("unsupported modulation order");
    }
}

std::size_t OfdmConfig::data_bits_per_frame() const
{
    return symbols_per_frame * data_subcarriers() * bits_per_symbol();
}

std::vector<int> OfdmConfig::pilot_positions() const
{
    std::vector<int> positions(pilot_count());
    for (std::size_t m = 0; m < positions.size(); ++m)
        positions[m] = static_cast<int>(m * pilot_spacing);
    return positions;
}

int OfdmConfig::fft_bin(std::size_t subcarrier) const
{
    const auto half = static_cast<int>(occupied_subcarriers / 2);
    const auto q = static_cast<int>(subcarrier);
    return q < half ? q - half : q - half + 1;
}

std::span<const LtePreset> lte_presets()
{
    return kLtePresets;
}

OfdmConfig lte_config(double bandwidth_mhz)
{
    for (const LtePreset &preset : kLtePresets)
    {
        if (std::abs(preset.bandwidth_mhz - bandwidth_mhz) < 1e-9)
        {
            OfdmConfig config;
            config.fft_size = preset.fft_size;
            config.sampling_rate_hz = preset.sampling_rate_hz;
            config.occupied_subcarriers = preset.occupied_subcarriers;
            config.cp_samples = static_cast<std::size_t>(std::lround(36.0 * preset.fft_size / 512.0));
            config.subcarrier_spacing_hz = 15e3;
            return config;
        }
    }
    throw std::invalid_argument("no LTE preset for bandwidth " + std::to_string(bandwidth_mhz) + " MHz");
}

Complex pilot_symbol(const OfdmConfig &config, std::size_t symbol, std::size_t pilot_index)
{
    const std::uint64_t h =
        mix_seed(config.pilot_seed, (static_cast<std::uint64_t>(symbol) << 32) | pilot_index);
    const double a = 1.0 / std::sqrt(2.0);
    return {(h >> 63) ? -a : a, ((h >> 62) & 1U) ? -a : a};
}

std::vector<Complex> pilot_symbols(const OfdmConfig &config, std::size_t symbol)
{
    std::vector<Complex> pilots(config.pilot_count());
    for (std::size_t m = 0; m < pilots.size(); ++m)
        pilots[m] = pilot_symbol(config, symbol, m);
    return pilots;
}

ResourceGrid build_resource_grid(const OfdmConfig &config, std::span<const Complex> data_symbols)
{
    config.validate();
    const std::size_t expected = config.symbols_per_frame * config.data_subcarriers();
    if (data_symbols.size() != expected)
        throw std::invalid_argument("resource grid needs exactly " + std::to_string(expected) +
                                    " data symbols, got " + std::to_string(data_symbols.size()));

    const auto rows = static_cast<Eigen::Index>(config.symbols_per_frame);
    const auto cols = static_cast<Eigen::Index>(config.occupied_subcarriers);
    ResourceGrid grid{ComplexGrid(rows, cols), MaskGrid::Constant(rows, cols, false)};

    std::size_t next = 0;
    for (Eigen::Index s = 0; s < rows; ++s)
    {
        for (Eigen::Index k = 0; k < cols; ++k)
        {
            const auto q = static_cast<std::size_t>(k);
            if (config.is_pilot(q))
            {
                grid.symbols(s, k) = pilot_symbol(config, static_cast<std::size_t>(s), q / config.pilot_spacing);
                grid.pilot_mask(s, k) = true;
            }
            else
            {
                grid.symbols(s, k) = data_symbols[next++];
            }
        }
    }
    return grid;
}

std::vector<Complex> extract_data_cells(const ComplexGrid &grid, const OfdmConfig &config)
{
    std::vector<Complex> data;
    data.reserve(static_cast<std::size_t>(grid.rows()) * config.data_subcarriers());
    for (Eigen::Index s = 0; s < grid.rows(); ++s)
        for (Eigen::Index k = 0; k < grid.cols(); ++k)
            if (!config.is_pilot(static_cast<std::size_t>(k)))
                data.push_back(grid(s, k));
    return data;
}

std::vector<Complex> ifft_with_cp(std::span<const Complex> bins, std::size_t cp_samples)
{
    const std::size_t n = bins.size();
    if (n == 0)
        throw std::invalid_argument("empty DFT input");
    if (cp_samples > n)
        throw std::invalid_argument("cyclic prefix longer than the symbol");

    std::vector<Complex> segment(n + cp_samples);
    thread_fft().inv(segment.data() + cp_samples, bins.data(), static_cast<Eigen::Index>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = cp_samples; i < segment.size(); ++i)
        segment[i] *= scale;
    std::copy(segment.end() - static_cast<std::ptrdiff_t>(cp_samples), segment.end(), segment.begin());
    return segment;
}

std::vector<Complex> fft_strip_cp(std::span<const Complex> segment, std::size_t fft_size,
                                  std::size_t cp_samples)
{
    if (segment.size() != fft_size + cp_samples)
        throw std::invalid_argument("segment length " + std::to_string(segment.size()) + " != fft_size + cp (" +
                                    std::to_string(fft_size + cp_samples) + ")");
    std::vector<Complex> bins(fft_size);
    thread_fft().fwd(bins.data(), segment.data() + cp_samples, static_cast<Eigen::Index>(fft_size));
    const double scale = 1.0 / std::sqrt(static_cast<double>(fft_size));
    for (Complex &b : bins)
        b *= scale;
    return bins;
}

std::vector<Complex> map_to_bins(std::span<const Complex> subcarriers, const OfdmConfig &config)
{
    if (subcarriers.size() != config.occupied_subcarriers)
        throw std::invalid_argument("grid row length does not match occupied_subcarriers");
    const auto n = static_cast<int>(config.fft_size);
    std::vector<Complex> bins(config.fft_size, Complex{});
    for (std::size_t q = 0; q < subcarriers.size(); ++q)
        bins[static_cast<std::size_t>((config.fft_bin(q) + n) % n)] = subcarriers[q];
    return bins;
}

std::vector<Complex> extract_from_bins(std::span<const Complex> bins, const OfdmConfig &config)
{
    if (bins.size() != config.fft_size)
        throw std::invalid_argument("bin vector length does not match fft_size");
    const auto n = static_cast<int>(config.fft_size);
    std::vector<Complex> subcarriers(config.occupied_subcarriers);
    for (std::size_t q = 0; q < subcarriers.size(); ++q)
        subcarriers[q] = bins[static_cast<std::size_t>((config.fft_bin(q) + n) % n)];
    return subcarriers;
}

std::vector<Complex> ofdm_modulate(std::span<const Complex> grid_row, const OfdmConfig &config)
{
    const std::vector<Complex> bins = map_to_bins(grid_row, config);
    return ifft_with_cp(bins, config.cp_samples);
}

std::vector<Complex> ofdm_demodulate(std::span<const Complex> segment, const OfdmConfig &config)
{
    const std::vector<Complex> bins = fft_strip_cp(segment, config.fft_size, config.cp_samples);
    return extract_from_bins(bins, config);
}

TimeSignal modulate_frame(const ComplexGrid &grid, const OfdmConfig &config)
{
    TimeSignal signal;
    signal.sampling_rate_hz = config.sampling_rate_hz;
    signal.samples.reserve(static_cast<std::size_t>(grid.rows()) * config.symbol_length());
    for (Eigen::Index s = 0; s < grid.rows(); ++s)
    {
        const std::vector<Complex> segment = ofdm_modulate(row_span(grid, s), config);
        signal.samples.insert(signal.samples.end(), segment.begin(), segment.end());
    }
    return signal;
}

ComplexGrid demodulate_frame(const TimeSignal &signal, const OfdmConfig &config)
{
    if (signal.samples.size() != config.frame_length())
        throw std::invalid_argument("frame length " + std::to_string(signal.samples.size()) + " != " +
                                    std::to_string(config.frame_length()));
    ComplexGrid grid(static_cast<Eigen::Index>(config.symbols_per_frame),
                     static_cast<Eigen::Index>(config.occupied_subcarriers));
    const std::span<const Complex> samples(signal.samples);
    for (std::size_t s = 0; s < config.symbols_per_frame; ++s)
    {
        const std::vector<Complex> row =
            ofdm_demodulate(samples.subspan(s * config.symbol_length(), config.symbol_length()), config);
        std::copy(row.begin(), row.end(), row_span(grid, static_cast<Eigen::Index>(s)).begin());
    }
    return grid;
}

Complex clamp_channel(Complex h)
{
    const double magnitude = std::abs(h);
    if (magnitude >= kEqualizerFloor)
        return h;
    if (!(magnitude > 0.0))
        return {kEqualizerFloor, 0.0};
    return h * (kEqualizerFloor / magnitude);
}

EqualizerOutput equalize_and_demap(std::span<const Complex> received,
                                   std::span<const Complex> channel_estimate, const OfdmConfig &config)
{
    if (received.size() != channel_estimate.size())
        throw std::invalid_argument("received and channel estimate lengths differ");
    EqualizerOutput out;
    out.bits.reserve(received.size() * config.bits_per_symbol());
    for (std::size_t k = 0; k < received.size(); ++k)
    {
        const Complex h = clamp_channel(channel_estimate[k]);
        if (h != channel_estimate[k])
            ++out.clamped_bins;
        demap_symbol(received[k] / h, config.modulation_order, out.bits);
    }
    return out;
}

} // namespace ltechest
