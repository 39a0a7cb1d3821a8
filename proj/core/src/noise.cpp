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

#include <cmath>
#include <random>
#include <stdexcept>

#include "ltechest/channel.hpp"
#include "ltechest/seeding.hpp"

namespace ltechest
{

double mean_power(std::span<const Complex> samples)
{
    if (samples.empty())
        return 0.0;
    double total = 0.0;
    for (const Complex &x : samples)
        total += std::norm(x);
    return total / static_cast<double>(samples.size());
}

double noise_variance(double reference_power, double ratio_db)
{
    return reference_power / std::pow(10.0, ratio_db / 10.0);
}

TimeSignal add_awgn(const TimeSignal &signal, double snr_db, std::uint64_t seed)
{
    return add_awgn(signal, snr_db, seed, mean_power(signal.samples));
}

TimeSignal add_awgn(const TimeSignal &signal, double snr_db, std::uint64_t seed, double reference_power)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return signal;
    if (std::isnan(snr_db))
        throw std::invalid_argument("SNR is NaN");
    if (!(reference_power > 0.0))
        throw std::invalid_argument("cannot calibrate AWGN against a zero-power signal");

    const double sigma = std::sqrt(noise_variance(reference_power, snr_db) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);

    TimeSignal noisy = signal;
    for (Complex &x : noisy.samples)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        x += Complex(re, im);
    }
    return noisy;
}

TimeSignal add_impulse_noise(const TimeSignal &signal, double sir_db, double probability, std::uint64_t seed)
{
    return add_impulse_noise(signal, sir_db, probability, seed, mean_power(signal.samples));
}

TimeSignal add_impulse_noise(const TimeSignal &signal, double sir_db, double probability, std::uint64_t seed,
                             double reference_power)
{
    if (!(probability >= 0.0 && probability <= 1.0))
        throw std::invalid_argument("impulse probability must lie in [0, 1]");
    if (std::isnan(sir_db))
        throw std::invalid_argument("SIR is NaN");
    if (probability == 0.0 || (std::isinf(sir_db) && sir_db > 0.0))
        return signal;
    if (!(reference_power > 0.0))
        throw std::invalid_argument("cannot calibrate impulse noise against a zero-power signal");

    const double sigma = std::sqrt(noise_variance(reference_power, sir_db) / 2.0);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution gate(probability);
    std::normal_distribution<double> normal(0.0, sigma);

    TimeSignal noisy = signal;
    for (Complex &x : noisy.samples)
    {
        if (gate(rng))
        {
            const double re = normal(rng);
            const double im = normal(rng);
            x += Complex(re, im);
        }
    }
    return noisy;
}

TimeSignal add_noise(const TimeSignal &signal, const NoiseSpec &spec)
{
    const bool awgn = !(std::isinf(spec.snr_db) && spec.snr_db > 0.0);
    const bool impulses = spec.sir_db.has_value() && spec.impulse_probability > 0.0;
    if (!awgn && !impulses)
        return signal;

    const double power = mean_power(signal.samples);
    TimeSignal out = add_awgn(signal, spec.snr_db, stream_seed(spec.seed, SeedStream::awgn), power);
    if (spec.sir_db)
        out = add_impulse_noise(out, *spec.sir_db, spec.impulse_probability,
                                stream_seed(spec.seed, SeedStream::impulse), power);
    return out;
}

} // namespace ltechest
