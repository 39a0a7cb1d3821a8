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

#ifndef LTECHEST_CHANNEL_HPP
#define LTECHEST_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ltechest/grid.hpp"

namespace ltechest
{

struct PathTap
{
    double delay_ns;
    double power_db;
};

/// Tapped-delay-line power delay profile. Delays strictly increase from 0.
class PowerDelayProfile
{
  public:
    explicit PowerDelayProfile(std::vector<PathTap> taps);

    /// 3GPP Extended Vehicular A: 9 taps, 0..2510 ns.
    static PowerDelayProfile eva();

    const std::vector<PathTap> &taps() const { return taps_; }
    std::size_t path_count() const { return taps_.size(); }
    double max_delay_ns() const { return taps_.back().delay_ns; }

    /// Linear tap powers scaled to sum to one.
    std::vector<double> normalized_powers() const;

  private:
    std::vector<PathTap> taps_;
};

/// A profile tap after rounding its delay to the sampling grid; taps that land
/// on the same sample are merged by summing their normalized powers.
struct SampledTap
{
    std::size_t delay_samples;
    double power;
};

std::vector<SampledTap> quantize_profile(const PowerDelayProfile &profile, double sampling_rate_hz);

/// Maximum Doppler shift v·f_c/c for a speed in km/h.
double max_doppler_hz(double speed_kmh, double carrier_hz);

/// Per-sample complex gains of a time-varying tapped delay line.
struct ChannelRealization
{
    std::vector<std::vector<Complex>> tap_gains; ///< [tap][sample]
    std::vector<std::size_t> tap_delays_samples;
    double doppler_hz = 0.0;
    double sampling_rate_hz = 0.0;

    std::size_t tap_count() const { return tap_gains.size(); }
    std::size_t num_samples() const { return tap_gains.empty() ? 0 : tap_gains.front().size(); }
    std::size_t max_delay_samples() const;
};

inline constexpr std::size_t kDefaultSinusoids = 32;

/// Rayleigh fading with the classical (Jakes) Doppler spectrum, one
/// independent sum-of-sinusoids process per merged tap.
ChannelRealization generate_channel(const PowerDelayProfile &profile, double doppler_hz,
                                    std::size_t num_samples, double sampling_rate_hz,
                                    std::uint64_t seed, std::size_t sinusoids = kDefaultSinusoids);

/// Time-invariant channel with explicit gains and integer delays.
ChannelRealization static_channel(std::span<const Complex> gains, std::span<const std::size_t> delays,
                                  std::size_t num_samples, double sampling_rate_hz);

/// y(t) = Σ_l h_l(t)·x(t − d_l), with x(t) = 0 for t < 0. No noise is added.
TimeSignal apply_channel(const TimeSignal &tx, const ChannelRealization &realization);

/// H(k) at the mid-sample of the useful part of OFDM symbol `symbol_index`,
/// for every occupied subcarrier.
std::vector<Complex> true_frequency_response(const ChannelRealization &realization,
                                             const OfdmConfig &config, std::size_t symbol_index);

ComplexGrid true_frequency_response_frame(const ChannelRealization &realization,
                                          const OfdmConfig &config);

/// Writes `symbol_index,subcarrier,magnitude,phase` rows for a response grid.
void write_channel_csv(std::ostream &out, const ComplexGrid &response);

// ---- noise --------------------------------------------------------------

/// Use as snr_db to disable AWGN.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct NoiseSpec
{
    double snr_db = kNoNoise;
    std::optional<double> sir_db;
    double impulse_probability = 0.0;
    std::uint64_t seed = 0;
};

double mean_power(std::span<const Complex> samples);

/// Power ratio 10^(-db/10) times the reference power.
double noise_variance(double reference_power, double ratio_db);

/// Circular complex Gaussian noise with σ_w² = P/10^(snr/10), where P is the
/// measured mean power of `signal` (or `reference_power` when given).
TimeSignal add_awgn(const TimeSignal &signal, double snr_db, std::uint64_t seed);
TimeSignal add_awgn(const TimeSignal &signal, double snr_db, std::uint64_t seed,
                    double reference_power);

/// Bernoulli-Gaussian impulses i(n) = v(n)·λ(n): v circular Gaussian with
/// power σ_BG² = P/10^(sir/10), λ ~ Bernoulli(p).
TimeSignal add_impulse_noise(const TimeSignal &signal, double sir_db, double probability,
                             std::uint64_t seed);
TimeSignal add_impulse_noise(const TimeSignal &signal, double sir_db, double probability,
                             std::uint64_t seed, double reference_power);

/// Adds AWGN and then impulse noise, both calibrated against the power of
/// the (noiseless) input.
TimeSignal add_noise(const TimeSignal &signal, const NoiseSpec &spec);

} // namespace ltechest

#endif
