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

#ifndef LTECHEST_HARNESS_HPP
#define LTECHEST_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ltechest/estimators.hpp"
#include "ltechest/grid.hpp"
#include "ltechest/scenario_config.hpp"

namespace ltechest
{

/// Reported when the estimate matches the oracle exactly.
inline constexpr double kMseFloorDb = -300.0;

inline constexpr std::string_view kCsvHeader =
    "method,snr_db,sir_db,p,speed_kmh,frames,total_bits,bit_errors,ber,channel_mse_db,seed";

/// Hamming distance / length. Lengths must match.
double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);
std::size_t bit_errors(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

/// 10·log10(mean|Ĥ − H|² / mean|H|²), floored at kMseFloorDb.
double channel_mse_db(const ComplexGrid &estimate, const ComplexGrid &oracle);

struct SweepPoint
{
    std::size_t index = 0;
    double snr_db = kNoNoise;
    std::optional<double> sir_db;
    double p = 0.0;
};

/// Cross product snr × sir × p, indexed in that nesting order.
std::vector<SweepPoint> sweep_points(const ScenarioConfig &config);

struct BerRecord
{
    Method method = Method::ls;
    double snr_db = 0.0;
    std::optional<double> sir_db;
    double p = 0.0;
    double speed_kmh = 0.0;
    std::size_t frames = 0;
    std::size_t failed_frames = 0;
    std::size_t total_bits = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    double channel_mse_db = 0.0;
    std::uint64_t seed = 0;
    /// Per-frame bit error counts in frame order (successful frames only).
    std::vector<std::size_t> frame_bit_errors;
};

/// One transmitted and received frame, shared by all estimators at a sweep point.
struct SimulatedFrame
{
    Bits tx_data_bits;
    ComplexGrid received;
    ComplexGrid oracle;
};

SimulatedFrame simulate_frame(const ScenarioConfig &config, const SweepPoint &point,
                              std::uint64_t frame_seed);

ChannelEstimate estimate_channel(const ScenarioConfig &config, Method method,
                                 const ComplexGrid &received);

/// Equalizes the data cells with the estimate and counts errors against the transmitted bits.
std::size_t count_data_bit_errors(const ScenarioConfig &config, const SimulatedFrame &frame,
                                  const ComplexGrid &estimate);

/// frames_per_point frames for a single estimator.
BerRecord run_point(const ScenarioConfig &config, const SweepPoint &point, Method method);

/// frames_per_point frames evaluated by every estimator on identical frames.
std::vector<BerRecord> run_point(const ScenarioConfig &config, const SweepPoint &point,
                                 std::span<const Method> methods);

void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, const BerRecord &record);

/// All sweep points × estimators. When `csv` is given the header and each
/// point's records are written and flushed as soon as the point completes;
/// a stream failure throws after the rows already written.
std::vector<BerRecord> run_scenario(const ScenarioConfig &config, std::ostream *csv = nullptr);

} // namespace ltechest

#endif
