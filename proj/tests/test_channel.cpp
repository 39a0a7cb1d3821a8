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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ltechest/channel.hpp"
#include "test_support.hpp"

using namespace ltechest;
using ltechest::testing::random_complex;

TEST_SUITE("profile")
{
    TEST_CASE("EVA table")
    {
        const PowerDelayProfile eva = PowerDelayProfile::eva();
        const double delays[] = {0, 30, 150, 310, 370, 710, 1090, 1730, 2510};
        const double powers[] = {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9};
        REQUIRE(eva.path_count() == 9);
        for (std::size_t i = 0; i < 9; ++i)
        {
            CHECK(eva.taps()[i].delay_ns == delays[i]);
            CHECK(eva.taps()[i].power_db == powers[i]);
        }
        CHECK(eva.max_delay_ns() == 2510.0);

        double sum = 0.0;
        const auto normalized = eva.normalized_powers();
        for (std::size_t i = 0; i < 9; ++i)
        {
            sum += normalized[i];
            CHECK(normalized[i] / normalized[0] == doctest::Approx(std::pow(10.0, powers[i] / 10.0)));
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("malformed profiles are rejected")
    {
        CHECK_THROWS_AS(PowerDelayProfile({}), std::invalid_argument);
        CHECK_THROWS_AS(PowerDelayProfile({{10.0, 0.0}}), std::invalid_argument);
        CHECK_THROWS_AS(PowerDelayProfile({{0.0, 0.0}, {0.0, -1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(PowerDelayProfile({{0.0, 0.0}, {50.0, -1.0}, {40.0, -2.0}}), std::invalid_argument);
    }

    TEST_CASE("EVA quantized at 7.68 MHz")
    {
        // round(delay_ns · 7.68e-3): 0, 0.23, 1.15, 2.38, 2.84, 5.45, 8.37, 13.29, 19.28.
        const auto taps = quantize_profile(PowerDelayProfile::eva(), 7.68e6);
        const std::size_t expected[] = {0, 1, 2, 3, 5, 8, 13, 19};
        REQUIRE(taps.size() == 8);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(taps[i].delay_samples == expected[i]);

        const auto p = PowerDelayProfile::eva().normalized_powers();
        CHECK(taps[0].power == doctest::Approx(p[0] + p[1]));
        CHECK(taps[1].power == doctest::Approx(p[2]));
        double total = 0.0;
        for (const SampledTap &tap : taps)
            total += tap.power;
        CHECK(total == doctest::Approx(1.0));
    }

    TEST_CASE("maximum Doppler at 350 km/h and 2.15 GHz")
    {
        const double expected = (350.0 / 3.6) * 2.15e9 / 299792458.0;
        CHECK(max_doppler_hz(350.0, 2.15e9) == doctest::Approx(expected));
        CHECK(max_doppler_hz(350.0, 2.15e9) == doctest::Approx(697.0).epsilon(1e-3));
        CHECK(max_doppler_hz(0.0, 2.15e9) == 0.0);
    }
}

TEST_SUITE("fading")
{
    TEST_CASE("zero Doppler gives constant gains")
    {
        for (std::uint64_t seed : {1ULL, 2ULL, 99ULL})
        {
            const auto ch = generate_channel(PowerDelayProfile::eva(), 0.0, 5000, 7.68e6, seed);
            REQUIRE(ch.tap_count() == 8);
            for (const auto &tap : ch.tap_gains)
                for (const Complex &g : tap)
                    CHECK(g == tap.front());
        }
    }

    TEST_CASE("identical seeds give identical gains")
    {
        const auto a = generate_channel(PowerDelayProfile::eva(), 697.0, 20000, 7.68e6, 42);
        const auto b = generate_channel(PowerDelayProfile::eva(), 697.0, 20000, 7.68e6, 42);
        const auto c = generate_channel(PowerDelayProfile::eva(), 697.0, 20000, 7.68e6, 43);
        CHECK(a.tap_gains == b.tap_gains);
        CHECK(a.tap_gains != c.tap_gains);
        CHECK(a.tap_delays_samples == std::vector<std::size_t>{0, 1, 2, 3, 5, 8, 13, 19});
        CHECK(a.max_delay_samples() == 19);
        CHECK(a.doppler_hz == 697.0);
    }

    TEST_CASE("gains follow the direct sinusoid sum despite recursive rotation")
    {
        // Over a long window the phasor recursion must stay on the sum-of-sinusoids
        // trajectory; a smooth process has small second differences.
        const double fd = 697.0;
        const double fs = 7.68e6;
        const auto ch = generate_channel(PowerDelayProfile::eva(), fd, 200000, fs, 5);
        for (const auto &tap : ch.tap_gains)
        {
            double worst = 0.0;
            for (std::size_t t = 2; t < tap.size(); ++t)
                worst = std::max(worst, std::abs(tap[t] - 2.0 * tap[t - 1] + tap[t - 2]));
            // |h''| ≤ Σ|c_n|(2π f_d / f_s)², with Σ|c_n| ≤ √(M·P) for M = 32.
            const double bound = std::sqrt(32.0) * std::pow(2.0 * std::numbers::pi * fd / fs, 2.0) * 4.0;
            CHECK(worst < bound);
        }
    }

    TEST_CASE("per-tap power and autocorrelation, reduced sample")
    {
        const double fd = 697.0;
        const double fs = 7.68e6;
        const auto taps = quantize_profile(PowerDelayProfile::eva(), fs);
        const std::size_t lag = static_cast<std::size_t>(0.25 / fd * fs); // τ·f_d = 0.25
        std::vector<double> power(taps.size(), 0.0);
        double corr = 0.0;
        double norm = 0.0;
        const std::size_t seeds = 200;
        for (std::uint64_t seed = 0; seed < seeds; ++seed)
        {
            const auto ch = generate_channel(PowerDelayProfile::eva(), fd, lag + 1, fs, seed);
            for (std::size_t l = 0; l < taps.size(); ++l)
            {
                power[l] += std::norm(ch.tap_gains[l][0]);
                corr += (ch.tap_gains[l][0] * std::conj(ch.tap_gains[l][lag])).real();
                norm += std::norm(ch.tap_gains[l][0]);
            }
        }
        const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * double(lag) / fs);
        CHECK(std::abs(corr / norm - j0) < 0.05);
        // 200 draws of an exponential variable: 5% relative standard error per tap.
        for (std::size_t l = 0; l < taps.size(); ++l)
            CHECK(power[l] / double(seeds) == doctest::Approx(taps[l].power).epsilon(0.25));
    }

    TEST_CASE("invalid generator arguments")
    {
        const auto eva = PowerDelayProfile::eva();
        CHECK_THROWS_AS(generate_channel(eva, -1.0, 10, 7.68e6, 1), std::invalid_argument);
        CHECK_THROWS_AS(generate_channel(eva, 10.0, 0, 7.68e6, 1), std::invalid_argument);
        CHECK_THROWS_AS(generate_channel(eva, 10.0, 10, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(generate_channel(eva, 10.0, 10, 7.68e6, 1, 0), std::invalid_argument);
    }
}

TEST_SUITE("apply")
{
    TEST_CASE("identity and shift-and-scale")
    {
        const TimeSignal x{random_complex(100, 1), 7.68e6};
        const std::vector<Complex> unit{1.0};
        const std::vector<std::size_t> zero{0};
        CHECK(apply_channel(x, static_channel(unit, zero, 100, 7.68e6)).samples == x.samples);

        const Complex g(0.3, -0.7);
        const std::vector<Complex> gain{g};
        const std::vector<std::size_t> delay{4};
        const auto y = apply_channel(x, static_channel(gain, delay, 100, 7.68e6)).samples;
        for (std::size_t t = 0; t < 100; ++t)
            CHECK(std::abs(y[t] - (t < 4 ? Complex{} : g * x.samples[t - 4])) < 1e-15);
    }

    TEST_CASE("time-varying taps match direct convolution")
    {
        const TimeSignal x{random_complex(3000, 2), 7.68e6};
        const auto ch = generate_channel(PowerDelayProfile::eva(), 697.0, 3000, 7.68e6, 3);
        const auto y = apply_channel(x, ch).samples;
        double worst = 0.0;
        for (std::size_t t = 0; t < 3000; ++t)
        {
            Complex expected{};
            for (std::size_t l = 0; l < ch.tap_count(); ++l)
                if (t >= ch.tap_delays_samples[l])
                    expected += ch.tap_gains[l][t] * x.samples[t - ch.tap_delays_samples[l]];
            worst = std::max(worst, std::abs(y[t] - expected));
        }
        CHECK(worst < 1e-13);
    }

    TEST_CASE("two static taps are the sum of two shifted copies")
    {
        const TimeSignal x{random_complex(64, 4), 1.0};
        const std::vector<Complex> gains{Complex(0.8, 0.1), Complex(-0.2, 0.4)};
        const std::vector<std::size_t> delays{0, 3};
        const auto y = apply_channel(x, static_channel(gains, delays, 64, 1.0)).samples;
        for (std::size_t t = 0; t < 64; ++t)
        {
            const Complex expected = gains[0] * x.samples[t] + (t >= 3 ? gains[1] * x.samples[t - 3] : Complex{});
            CHECK(std::abs(y[t] - expected) < 1e-15);
        }
    }

    TEST_CASE("short realization is rejected")
    {
        const TimeSignal x{random_complex(10, 5), 1.0};
        const std::vector<Complex> gains{1.0};
        const std::vector<std::size_t> delays{0};
        CHECK_THROWS_AS(apply_channel(x, static_channel(gains, delays, 9, 1.0)), std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(x, ChannelRealization{}), std::invalid_argument);
        CHECK_THROWS_AS(static_channel(gains, std::vector<std::size_t>{}, 9, 1.0), std::invalid_argument);
    }

    TEST_CASE("energy is scaled by the tap power sum")
    {
        const OfdmConfig config = ltechest::testing::short_frame_config(20);
        const auto bits = ltechest::testing::random_bits(config.data_bits_per_frame(), 6);
        const TimeSignal x =
            modulate_frame(build_resource_grid(config, modulate_bits(bits, config)).symbols, config);
        const std::vector<Complex> gains{Complex(0.6, 0.2), Complex(0.1, -0.5), Complex(0.3, 0.3)};
        const std::vector<std::size_t> delays{0, 5, 19};
        const auto y = apply_channel(x, static_channel(gains, delays, x.samples.size(), 7.68e6));
        double expected = 0.0;
        for (const Complex &g : gains)
            expected += std::norm(g);
        CHECK(mean_power(y.samples) / mean_power(x.samples) == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_SUITE("frequency response")
{
    TEST_CASE("single tap at delay 0 is flat")
    {
        const OfdmConfig config = ltechest::testing::short_frame_config(2);
        const Complex g(0.4, 0.9);
        const std::vector<Complex> gains{g};
        const std::vector<std::size_t> delays{0};
        for (const Complex &h : true_frequency_response(static_channel(gains, delays, 2000, 7.68e6), config, 1))
            CHECK(h == g);
    }

    TEST_CASE("delayed impulse is a linear phase")
    {
        const OfdmConfig config = ltechest::testing::short_frame_config(2);
        const std::vector<Complex> gains{1.0};
        const std::vector<std::size_t> delays{7};
        const auto h = true_frequency_response(static_channel(gains, delays, 2000, 7.68e6), config, 0);
        for (std::size_t k = 0; k < h.size(); ++k)
        {
            const Complex expected = std::polar(1.0, -2.0 * std::numbers::pi * config.fft_bin(k) * 7.0 / 512.0);
            CHECK(std::abs(h[k] - expected) < 1e-12);
        }
    }

    TEST_CASE("static EVA loopback equals the oracle")
    {
        const OfdmConfig config = ltechest::testing::short_frame_config(4);
        const auto lb = ltechest::testing::loopback(config, ltechest::testing::static_eva(config));
        const ComplexGrid ratio = lb.received.cwiseQuotient(lb.grid.symbols);
        CHECK((ratio - lb.oracle).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("oracle samples the middle of the useful part")
    {
        const OfdmConfig config = ltechest::testing::short_frame_config(3);
        auto ch = generate_channel(PowerDelayProfile::eva(), 697.0, config.frame_length(), 7.68e6, 8);
        const std::size_t mid = 2 * 548 + 36 + 256;
        const auto h = true_frequency_response(ch, config, 2);
        Complex dc_sum{};
        for (std::size_t l = 0; l < ch.tap_count(); ++l)
            dc_sum += ch.tap_gains[l][mid] *
                      std::polar(1.0, -2.0 * std::numbers::pi * config.fft_bin(0) * double(ch.tap_delays_samples[l]) / 512.0);
        CHECK(std::abs(h[0] - dc_sum) < 1e-12);
        CHECK_THROWS_AS(true_frequency_response(ch, config, 3), std::out_of_range);
    }

    TEST_CASE("CSV dump")
    {
        ComplexGrid grid(1, 2);
        grid << Complex(0.0, 2.0), Complex(-1.0, 0.0);
        std::ostringstream out;
        write_channel_csv(out, grid);
        CHECK(out.str() == "symbol_index,subcarrier,magnitude,phase\n0,0,2,1.57079633\n0,1,1,3.14159265\n");
    }
}
