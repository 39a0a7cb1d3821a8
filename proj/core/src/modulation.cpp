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
#include <stdexcept>
#include <string>

#include "ltechest/grid.hpp"

namespace ltechest
{
namespace
{

// Square QAM described per axis: `axis_bits` Gray-coded bits select one of
// 2^axis_bits amplitude levels −(L−1), …, −1, +1, …, L−1 (before scaling).
struct QamAxis
{
    unsigned axis_bits;
    int levels;
    double scale; // 1/sqrt(average power)
};

QamAxis qam_axis(unsigned modulation_order)
{
    switch (modulation_order)
    {
    case 4:
        return {1, 2, 1.0 / std::sqrt(2.0)};
    case 16:
        return {2, 4, 1.0 / std::sqrt(10.0)};
    case 64:
        return {3, 8, 1.0 / std::sqrt(42.0)};
    default:
        throw std::invalid_argument("unsupported modulation order " + std::to_string(modulation_order) +
                                    " (expected 4, 16 or 64)");
    }
}

unsigned gray_to_index(unsigned gray)
{
    unsigned index = gray;
    for (unsigned shift = gray >> 1; shift != 0; shift >>= 1)
        index ^= shift;
    return index;
}

double level_of(unsigned gray, const QamAxis &axis)
{
    return static_cast<double>(2 * static_cast<int>(gray_to_index(gray)) - (axis.levels - 1));
}

unsigned nearest_index(double coordinate, const QamAxis &axis)
{
    const double position = (coordinate / axis.scale + (axis.levels - 1)) / 2.0;
    const double rounded = std::round(position);
    if (!(rounded > 0.0)) // also catches NaN
        return 0;
    return static_cast<unsigned>(std::min(rounded, static_cast<double>(axis.levels - 1)));
}

} // namespace

std::vector<Complex> modulate_bits(std::span<const std::uint8_t> bits, unsigned modulation_order)
{
    const QamAxis axis = qam_axis(modulation_order);
    const std::size_t per_symbol = 2 * axis.axis_bits;
    if (bits.size() % per_symbol != 0)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                    " is not a multiple of " + std::to_string(per_symbol));

    std::vector<Complex> symbols;
    symbols.reserve(bits.size() / per_symbol);
    for (std::size_t offset = 0; offset < bits.size(); offset += per_symbol)
    {
        unsigned gray_i = 0;
        unsigned gray_q = 0;
        for (unsigned b = 0; b < axis.axis_bits; ++b)
        {
            gray_i = (gray_i << 1) | (bits[offset + b] & 1U);
            gray_q = (gray_q << 1) | (bits[offset + axis.axis_bits + b] & 1U);
        }
        symbols.emplace_back(level_of(gray_i, axis) * axis.scale, level_of(gray_q, axis) * axis.scale);
    }
    return symbols;
}

std::vector<Complex> modulate_bits(std::span<const std::uint8_t> bits, const OfdmConfig &config)
{
    return modulate_bits(bits, config.modulation_order);
}

Complex nearest_constellation_point(Complex x, unsigned modulation_order)
{
    const QamAxis axis = qam_axis(modulation_order);
    auto level = [&](double coordinate) {
        const auto index = static_cast<int>(nearest_index(coordinate, axis));
        return (2 * index - (axis.levels - 1)) * axis.scale;
    };
    return {level(x.real()), level(x.imag())};
}

void demap_symbol(Complex x, unsigned modulation_order, Bits &out)
{
    const QamAxis axis = qam_axis(modulation_order);
    const unsigned index_i = nearest_index(x.real(), axis);
    const unsigned index_q = nearest_index(x.imag(), axis);
    const unsigned gray_i = index_i ^ (index_i >> 1);
    const unsigned gray_q = index_q ^ (index_q >> 1);
    for (unsigned b = axis.axis_bits; b-- > 0;)
        out.push_back(static_cast<std::uint8_t>((gray_i >> b) & 1U));
    for (unsigned b = axis.axis_bits; b-- > 0;)
        out.push_back(static_cast<std::uint8_t>((gray_q >> b) & 1U));
}

Bits demap_symbols(std::span<const Complex> symbols, unsigned modulation_order)
{
    const QamAxis axis = qam_axis(modulation_order);
    Bits bits;
    bits.reserve(symbols.size() * 2 * axis.axis_bits);
    for (const Complex &s : symbols)
        demap_symbol(s, modulation_order, bits);
    return bits;
}

double constellation_min_distance(unsigned modulation_order)
{
    return 2.0 * qam_axis(modulation_order).scale;
}

} // namespace ltechest
