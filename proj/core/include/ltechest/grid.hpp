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

#ifndef LTECHEST_GRID_HPP
#define LTECHEST_GRID_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ltechest
{

using Complex = std::complex<double>;
using Bits = std::vector<std::uint8_t>;

/// Row-major so that each OFDM symbol (row) is contiguous and can be viewed as a span.
using ComplexGrid = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MaskGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const Complex> row_span(const ComplexGrid &grid, Eigen::Index row)
{
    return {grid.data() + row * grid.cols(), static_cast<std::size_t>(grid.cols())};
}

inline std::span<Complex> row_span(ComplexGrid &grid, Eigen::Index row)
{
    return {grid.data() + row * grid.cols(), static_cast<std::size_t>(grid.cols())};
}

/// Numerology of one OFDM downlink link.
///
/// Occupied subcarriers are indexed 0..occupied_subcarriers-1 from the lowest
/// frequency upwards. They are placed around DC with the DC bin left empty:
/// the lower floor(occupied/2) subcarriers sit on negative bins, the rest on
/// bins +1, +2, ... Comb pilots occupy logical indices 0, ΔP, 2ΔP, ...
struct OfdmConfig
{
    std::size_t fft_size = 512;
    std::size_t occupied_subcarriers = 301;
    std::size_t cp_samples = 36;
    double subcarrier_spacing_hz = 15e3;
    double sampling_rate_hz = 7.68e6;
    std::size_t pilot_spacing = 6;
    std::size_t symbols_per_frame = 140;
    unsigned modulation_order = 16;
    std::uint64_t pilot_seed = 0x5eedULL;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    std::size_t pilot_count() const;
    std::size_t bits_per_symbol() const;
    std::size_t symbol_length() const { return fft_size + cp_samples; }
    std::size_t frame_length() const { return symbols_per_frame * symbol_length(); }
    std::size_t data_subcarriers() const { return occupied_subcarriers - pilot_count(); }
    std::size_t data_bits_per_frame() const;
    bool is_pilot(std::size_t subcarrier) const { return subcarrier % pilot_spacing == 0; }

    /// Logical pilot positions m·ΔP, m = 0..N_p-1.
    std::vector<int> pilot_positions() const;

    /// Signed FFT bin carrying the given occupied subcarrier.
    int fft_bin(std::size_t subcarrier) const;
};

/// One row of the LTE OFDMA numerology table.
struct LtePreset
{
    double bandwidth_mhz;
    std::size_t fft_size;
    double sampling_rate_hz;
    std::size_t occupied_subcarriers;
};

std::span<const LtePreset> lte_presets();

/// OFDM configuration for a given transmission bandwidth (1.25, 2.5, 5, 10, 15 or 20 MHz).
/// The cyclic prefix is 36 samples at N = 512, scaled with N for the other rows.
OfdmConfig lte_config(double bandwidth_mhz);

// ---- constellation ------------------------------------------------------

/// Gray-mapped square QAM with unit average power. Bits are consumed MSB
/// first; the first half of each symbol's bits selects the in-phase level.
std::vector<Complex> modulate_bits(std::span<const std::uint8_t> bits, unsigned modulation_order);
std::vector<Complex> modulate_bits(std::span<const std::uint8_t> bits, const OfdmConfig &config);

Complex nearest_constellation_point(Complex x, unsigned modulation_order);
void demap_symbol(Complex x, unsigned modulation_order, Bits &out);
Bits demap_symbols(std::span<const Complex> symbols, unsigned modulation_order);

/// Smallest distance between two constellation points (unit average power).
double constellation_min_distance(unsigned modulation_order);

// ---- resource grid ------------------------------------------------------

struct ResourceGrid
{
    ComplexGrid symbols;
    MaskGrid pilot_mask;
};

/// Unit-magnitude QPSK pilot for OFDM symbol s and pilot index m; a pure
/// function of (pilot_seed, s, m), so the receiver regenerates it.
Complex pilot_symbol(const OfdmConfig &config, std::size_t symbol, std::size_t pilot_index);

/// All pilots of one OFDM symbol, in pilot-index order.
std::vector<Complex> pilot_symbols(const OfdmConfig &config, std::size_t symbol);

/// Fills data cells in symbol-major, subcarrier-ascending order. The number
/// of data symbols must match the data cell count exactly.
ResourceGrid build_resource_grid(const OfdmConfig &config, std::span<const Complex> data_symbols);

/// Data cells of a grid in the order used by build_resource_grid.
std::vector<Complex> extract_data_cells(const ComplexGrid &grid, const OfdmConfig &config);

// ---- transforms ---------------------------------------------------------

struct TimeSignal
{
    std::vector<Complex> samples;
    double sampling_rate_hz = 0.0;
};

/// Unitary inverse DFT of a full N-bin vector followed by a cyclic prefix.
std::vector<Complex> ifft_with_cp(std::span<const Complex> bins, std::size_t cp_samples);

/// Drops the cyclic prefix and applies the unitary forward DFT.
std::vector<Complex> fft_strip_cp(std::span<const Complex> segment, std::size_t fft_size,
                                  std::size_t cp_samples);

/// Places occupied subcarriers on FFT bins (DC and edge bins zero).
std::vector<Complex> map_to_bins(std::span<const Complex> subcarriers, const OfdmConfig &config);
std::vector<Complex> extract_from_bins(std::span<const Complex> bins, const OfdmConfig &config);

std::vector<Complex> ofdm_modulate(std::span<const Complex> grid_row, const OfdmConfig &config);
std::vector<Complex> ofdm_demodulate(std::span<const Complex> segment, const OfdmConfig &config);

TimeSignal modulate_frame(const ComplexGrid &grid, const OfdmConfig &config);
ComplexGrid demodulate_frame(const TimeSignal &signal, const OfdmConfig &config);

// ---- receiver -----------------------------------------------------------

/// |Ĥ| is clamped to this floor before division.
inline constexpr double kEqualizerFloor = 1e-12;

/// Ĥ with magnitude clamped to kEqualizerFloor (phase kept, zero maps to +floor).
Complex clamp_channel(Complex h);

struct EqualizerOutput
{
    Bits bits;
    std::size_t clamped_bins = 0;
};

/// Zero-forcing equalization X̂ = Y/Ĥ followed by hard Gray demapping.
EqualizerOutput equalize_and_demap(std::span<const Complex> received,
                                   std::span<const Complex> channel_estimate,
                                   const OfdmConfig &config);

} // namespace ltechest

#endif
