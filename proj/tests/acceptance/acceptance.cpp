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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ltechest/channel.hpp"
#include "ltechest/estimators.hpp"
#include "ltechest/harness.hpp"
#include "ltechest/scenario_config.hpp"
#include "ltechest/svr.hpp"

using namespace ltechest;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args)
{
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, format, args...);
    return buffer;
}

Bits random_bits(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Bits bits(count);
    for (auto &b : bits)
        b = static_cast<std::uint8_t>(rng() & 1U);
    return bits;
}

std::vector<Complex> random_complex(std::size_t count, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<Complex> out(count);
    for (auto &x : out)
        x = {normal(rng), normal(rng)};
    return out;
}

double db(double ratio)
{
    return 10.0 * std::log10(ratio);
}

// ---- 1 ------------------------------------------------------------------

Outcome transform_identities()
{
    const OfdmConfig config = lte_config(5.0);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const auto row = random_complex(config.occupied_subcarriers, seed);
        const auto back = ofdm_demodulate(ofdm_modulate(row, config), config);
        for (std::size_t k = 0; k < row.size(); ++k)
            worst = std::max(worst, std::abs(back[k] - row[k]));
    }

    const Bits bits = random_bits(config.data_bits_per_frame(), 1);
    const ResourceGrid grid = build_resource_grid(config, modulate_bits(bits, config));
    const TimeSignal tx = modulate_frame(grid.symbols, config);
    const std::vector<Complex> unit{1.0};
    const std::vector<std::size_t> zero{0};
    const TimeSignal rx = apply_channel(tx, static_channel(unit, zero, tx.samples.size(), config.sampling_rate_hz));
    const auto y = extract_data_cells(demodulate_frame(rx, config), config);
    const std::size_t errors = bit_errors(bits, equalize_and_demap(y, std::vector<Complex>(y.size(), 1.0), config).bits);

    return {worst <= 1e-12 && errors == 0,
            fmt("max round-trip error %.3g (limit 1e-12), loop bit errors %zu of %zu", worst, errors, bits.size())};
}

// ---- 2 ------------------------------------------------------------------

Outcome static_channel_oracle()
{
    const OfdmConfig config = lte_config(5.0);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        // Zero Doppler: every tap is a constant complex gain for the whole frame.
        const auto channel =
            generate_channel(PowerDelayProfile::eva(), 0.0, config.frame_length(), config.sampling_rate_hz, seed);
        const Bits bits = random_bits(config.data_bits_per_frame(), seed + 10);
        const ResourceGrid grid = build_resource_grid(config, modulate_bits(bits, config));
        const ComplexGrid rx = demodulate_frame(apply_channel(modulate_frame(grid.symbols, config), channel), config);
        for (std::size_t s = 0; s < config.symbols_per_frame; ++s)
        {
            const auto truth = true_frequency_response(channel, config, s);
            const auto h = ls_pilot_estimate(received_pilots(rx, config, s), pilot_symbols(config, s));
            for (std::size_t m = 0; m < h.size(); ++m)
            {
                const Complex t = truth[m * config.pilot_spacing];
                worst = std::max(worst, std::abs(h[m] - t) / std::abs(t));
            }
        }
    }
    return {worst <= 1e-9, fmt("max relative pilot error %.3g (limit 1e-9) over 5 frames", worst)};
}

// ---- 3 ------------------------------------------------------------------

Outcome channel_statistics()
{
    const double fs = 7.68e6;
    const double fd = max_doppler_hz(350.0, 2.15e9);
    const PowerDelayProfile eva = PowerDelayProfile::eva();
    const auto taps = quantize_profile(eva, fs);

    // Per-tap power: time average over 10^6 samples, then mean over 100 seeds.
    const std::size_t samples = 1'000'000;
    std::vector<double> power(taps.size(), 0.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const auto ch = generate_channel(eva, fd, samples, fs, 1000 + seed);
        for (std::size_t l = 0; l < taps.size(); ++l)
        {
            double sum = 0.0;
            for (const Complex &g : ch.tap_gains[l])
                sum += std::norm(g);
            power[l] += sum / double(samples) / 100.0;
        }
    }
    double worst_db = 0.0;
    for (std::size_t l = 0; l < taps.size(); ++l)
        worst_db = std::max(worst_db, std::abs(db(power[l] / taps[l].power)));

    // Autocorrelation against J0 at lags τ·f_d = 0.05 … 0.5 over 200 realizations.
    const std::size_t max_lag = static_cast<std::size_t>(std::ceil(0.5 / fd * fs));
    const std::size_t window = 20000;
    std::vector<std::size_t> lags;
    for (int i = 1; i <= 10; ++i)
        lags.push_back(static_cast<std::size_t>(std::floor(0.05 * i / fd * fs)));
    std::vector<double> corr(lags.size(), 0.0);
    double norm = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const auto ch = generate_channel(eva, fd, window + max_lag + 1, fs, 5000 + seed);
        for (std::size_t l = 0; l < ch.tap_count(); ++l)
        {
            const auto &g = ch.tap_gains[l];
            for (std::size_t t = 0; t < window; t += 16)
            {
                norm += std::norm(g[t]);
                for (std::size_t i = 0; i < lags.size(); ++i)
                    corr[i] += (g[t] * std::conj(g[t + lags[i]])).real();
            }
        }
    }
    double worst_corr = 0.0;
    for (std::size_t i = 0; i < lags.size(); ++i)
    {
        const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * double(lags[i]) / fs);
        worst_corr = std::max(worst_corr, std::abs(corr[i] / norm - j0));
    }
    return {worst_db <= 0.5 && worst_corr <= 0.05,
            fmt("worst tap power deviation %.3f dB (limit 0.5), worst |R(tau) - J0| %.4f (limit 0.05), f_d = %.1f Hz",
                worst_db, worst_corr, fd)};
}

// ---- 4 ------------------------------------------------------------------

Outcome noise_calibration()
{
    // 13 faded frames of the 5 MHz numerology, just over 10^6 samples.
    const OfdmConfig config = lte_config(5.0);
    TimeSignal faded{{}, config.sampling_rate_hz};
    for (std::uint64_t f = 0; faded.samples.size() < 1'000'000; ++f)
    {
        const Bits bits = random_bits(config.data_bits_per_frame(), 40 + f);
        const TimeSignal tx =
            modulate_frame(build_resource_grid(config, modulate_bits(bits, config)).symbols, config);
        const auto ch = generate_channel(PowerDelayProfile::eva(), 696.8, tx.samples.size(), config.sampling_rate_hz, 60 + f);
        const TimeSignal rx = apply_channel(tx, ch);
        faded.samples.insert(faded.samples.end(), rx.samples.begin(), rx.samples.end());
    }
    const double p = mean_power(faded.samples);
    const double n = double(faded.samples.size());

    double worst_snr = 0.0;
    double worst_sir = 0.0;
    for (double target : {0.0, 10.0, 20.0, 30.0})
    {
        const TimeSignal noisy = add_awgn(faded, target, 70 + std::uint64_t(target));
        double noise = 0.0;
        for (std::size_t i = 0; i < faded.samples.size(); ++i)
            noise += std::norm(noisy.samples[i] - faded.samples[i]);
        worst_snr = std::max(worst_snr, std::abs(db(p / (noise / n)) - target));

        // SIR is defined against the impulse power σ_BG²; λ ≡ 1 exposes every draw.
        const TimeSignal hit = add_impulse_noise(faded, target, 1.0, 80 + std::uint64_t(target));
        double impulse = 0.0;
        for (std::size_t i = 0; i < faded.samples.size(); ++i)
            impulse += std::norm(hit.samples[i] - faded.samples[i]);
        worst_sir = std::max(worst_sir, std::abs(db(p / (impulse / n)) - target));
    }

    double worst_sigma = 0.0;
    for (double prob : {0.05, 0.1, 0.2})
    {
        const TimeSignal hit = add_impulse_noise(faded, 0.0, prob, 90);
        std::size_t active = 0;
        for (std::size_t i = 0; i < faded.samples.size(); ++i)
            active += hit.samples[i] != faded.samples[i] ? 1 : 0;
        const double sigma = std::sqrt(n * prob * (1.0 - prob));
        worst_sigma = std::max(worst_sigma, std::abs(double(active) - n * prob) / sigma);
    }
    return {worst_snr <= 0.2 && worst_sir <= 0.2 && worst_sigma <= 3.0,
            fmt("worst SNR error %.3f dB, worst SIR error %.3f dB (limit 0.2), worst activation deviation %.2f sigma "
                "(limit 3) over %.0f samples",
                worst_snr, worst_sir, worst_sigma, n)};
}

// ---- 5 ------------------------------------------------------------------

std::vector<int> comb(std::size_t count)
{
    std::vector<int> p(count);
    for (std::size_t i = 0; i < count; ++i)
        p[i] = static_cast<int>(6 * i);
    return p;
}

Outcome solver_oracle()
{
    double worst_ridge = 0.0;
    for (std::size_t n : {4U, 16U, 51U, 64U})
    {
        SvrHyperparams params;
        params.epsilon = 0.0;
        params.c = 1e6;
        const PilotObservations obs{comb(n), random_complex(n, 300 + n)};
        const Eigen::MatrixXd gram = gram_matrix(obs.positions, params.kernel_sigma);
        const DualSolution s = solve_dual(gram, obs, params);

        Eigen::MatrixXd q = gram;
        q.diagonal().array() += params.gamma;
        Eigen::VectorXd re(static_cast<Eigen::Index>(n)), im(static_cast<Eigen::Index>(n));
        for (std::size_t m = 0; m < n; ++m)
        {
            re(Eigen::Index(m)) = obs.values[m].real();
            im(Eigen::Index(m)) = obs.values[m].imag();
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(q);
        const Eigen::VectorXd x_re = lu.solve(re);
        const Eigen::VectorXd x_im = lu.solve(im);
        for (std::size_t m = 0; m < n; ++m)
            worst_ridge = std::max({worst_ridge, std::abs(s.psi[m].real() - x_re(Eigen::Index(m))),
                                    std::abs(s.psi[m].imag() - x_im(Eigen::Index(m)))});
    }

    double worst_kkt = 0.0;
    std::size_t sparsity_violations = 0;
    std::size_t failures = 0;
    std::mt19937_64 rng(400);
    std::uniform_real_distribution<double> log_eps(-3.0, -0.5);
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        SvrHyperparams params;
        params.epsilon = std::pow(10.0, log_eps(rng));
        params.c = trial % 4 == 0 ? 0.3 : 1e2;
        const std::size_t n = 4 + trial % 61;
        const PilotObservations obs{comb(n), random_complex(n, 500 + trial, 0.5)};
        const Eigen::MatrixXd gram = gram_matrix(obs.positions, params.kernel_sigma);
        try
        {
            const DualSolution s = solve_dual(gram, obs, params);
            worst_kkt = std::max(worst_kkt, s.kkt_residual);
            const double inside = params.epsilon - 10.0 * params.solver_tolerance;
            for (std::size_t m = 0; m < n; ++m)
            {
                Complex fit{};
                for (std::size_t j = 0; j < n; ++j)
                    fit += gram(Eigen::Index(m), Eigen::Index(j)) * s.psi[j];
                const Complex e = obs.values[m] - fit;
                if (std::abs(e.real()) < inside && (s.alpha_re[m] != 0.0 || s.alpha_re_star[m] != 0.0))
                    ++sparsity_violations;
                if (std::abs(e.imag()) < inside && (s.alpha_im[m] != 0.0 || s.alpha_im_star[m] != 0.0))
                    ++sparsity_violations;
            }
        }
        catch (const SolverError &)
        {
            ++failures;
        }
    }
    return {worst_ridge <= 1e-6 && worst_kkt <= 1e-8 && sparsity_violations == 0 && failures == 0,
            fmt("ridge max error %.3g (limit 1e-6), worst KKT residual %.3g (limit 1e-8), sparsity violations %zu, "
                "solver failures %zu",
                worst_ridge, worst_kkt, sparsity_violations, failures)};
}

// ---- 6 ------------------------------------------------------------------

Outcome huber_continuity()
{
    std::mt19937_64 rng(600);
    std::uniform_real_distribution<double> log_u(-4.0, 2.0);
    double worst_ratio = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        SvrHyperparams p;
        p.epsilon = std::pow(10.0, log_u(rng));
        p.gamma = std::pow(10.0, log_u(rng));
        p.c = std::pow(10.0, log_u(rng));
        for (double knee : {p.epsilon, p.ec()})
        {
            const double below = epsilon_huber_cost(std::nextafter(knee, 0.0), p);
            const double above = epsilon_huber_cost(std::nextafter(knee, 1e300), p);
            // Machine precision relative to the magnitudes combined in the branches.
            const double scale = 1.5 * p.gamma * p.c * p.c + p.c * knee;
            worst_ratio = std::max(worst_ratio, std::abs(above - below) / (std::numeric_limits<double>::epsilon() * scale));
        }
    }
    return {worst_ratio <= 16.0, fmt("worst jump %.2f ulp of the branch scale (limit 16) over 1000 triples", worst_ratio)};
}

// ---- 7, 8, 9 ------------------------------------------------------------

struct PairedGap
{
    double mean = 0.0;
    double standard_error = 0.0;
};

PairedGap paired_gap(const BerRecord &worse, const BerRecord &better)
{
    const std::size_t n = worse.frame_bit_errors.size();
    PairedGap gap;
    if (n < 2 || better.frame_bit_errors.size() != n)
        return gap;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = double(worse.frame_bit_errors[i]) - double(better.frame_bit_errors[i]);
    for (double v : d)
        gap.mean += v / double(n);
    double var = 0.0;
    for (double v : d)
        var += (v - gap.mean) * (v - gap.mean) / double(n - 1);
    gap.standard_error = std::sqrt(var / double(n));
    return gap;
}

const BerRecord &find(const std::vector<BerRecord> &records, Method method, double snr, std::optional<double> sir,
                      double p)
{
    for (const BerRecord &r : records)
        if (r.method == method && r.snr_db == snr && r.sir_db == sir && r.p == p)
            return r;
    throw std::runtime_error("missing record");
}

Outcome snr_ordering()
{
    ScenarioConfig config = paper_table3_preset();
    config.snr_list = {10.0, 20.0, 30.0};
    config.frames_per_point = 100;
    config.master_seed = 3;
    const auto records = run_scenario(config);

    bool pass = true;
    std::string detail;
    for (double snr : config.snr_list)
    {
        const BerRecord &ls = find(records, Method::ls, snr, std::nullopt, 0.0);
        const BerRecord &df = find(records, Method::decision_feedback, snr, std::nullopt, 0.0);
        const BerRecord &svr = find(records, Method::svr, snr, std::nullopt, 0.0);
        const PairedGap vs_ls = paired_gap(ls, svr);
        const PairedGap vs_df = paired_gap(df, svr);
        const bool ok = svr.frames == 100 && ls.frames == 100 && df.frames == 100 && svr.ber < ls.ber &&
                        svr.ber < df.ber && vs_ls.mean > 3.0 * vs_ls.standard_error &&
                        vs_df.mean > 3.0 * vs_df.standard_error;
        pass = pass && ok;
        detail += fmt("%sSNR %g: LS %.4g DF %.4g SVR %.4g (gap/SE vs LS %.1f, vs DF %.1f)", detail.empty() ? "" : "; ",
                      snr, ls.ber, df.ber, svr.ber, vs_ls.mean / vs_ls.standard_error,
                      vs_df.mean / vs_df.standard_error);
    }
    return {pass, detail};
}

std::vector<BerRecord> sir_sweep_records;

Outcome sir_ordering()
{
    ScenarioConfig config = paper_table3_preset();
    config.snr_list = {20.0};
    config.sir_list = std::vector<double>{-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0};
    config.p_list = {0.1};
    config.frames_per_point = 100;
    config.master_seed = 4;
    sir_sweep_records = run_scenario(config);

    bool pass = true;
    std::string detail;
    for (double sir : {-15.0, -5.0, 5.0, 15.0})
    {
        const BerRecord &ls = find(sir_sweep_records, Method::ls, 20.0, sir, 0.1);
        const BerRecord &df = find(sir_sweep_records, Method::decision_feedback, 20.0, sir, 0.1);
        const BerRecord &svr = find(sir_sweep_records, Method::svr, 20.0, sir, 0.1);
        const bool ok = svr.frames == 100 && svr.ber < ls.ber && svr.ber < df.ber;
        pass = pass && ok;
        detail += fmt("%sSIR %g: LS %.4g DF %.4g SVR %.4g", detail.empty() ? "" : "; ", sir, ls.ber, df.ber, svr.ber);
    }
    return {pass, detail};
}

Outcome sir_monotone()
{
    // SVR BER must not increase with SIR beyond sampling noise: a rise larger than
    // 3 paired standard errors between consecutive SIR points counts as a violation.
    const std::vector<double> sirs{-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0};
    bool pass = sir_sweep_records.size() == 21;
    std::string detail = fmt("%zu records; SVR BER:", sir_sweep_records.size());
    for (std::size_t i = 0; pass && i < sirs.size(); ++i)
    {
        const BerRecord &r = find(sir_sweep_records, Method::svr, 20.0, sirs[i], 0.1);
        detail += fmt(" %.4g", r.ber);
        if (i > 0)
        {
            const BerRecord &prev = find(sir_sweep_records, Method::svr, 20.0, sirs[i - 1], 0.1);
            const PairedGap rise = paired_gap(r, prev);
            if (rise.mean > 3.0 * rise.standard_error)
                pass = false;
        }
    }
    return {pass, detail};
}

Outcome impulse_rate_trend()
{
    ScenarioConfig config = paper_table3_preset();
    config.snr_list = {30.0};
    config.sir_list = std::vector<double>{-15.0, -10.0, -5.0};
    config.p_list = {0.05, 0.2};
    config.estimators = {Method::svr};
    config.frames_per_point = 40;
    config.master_seed = 5;
    const auto records = run_scenario(config);

    bool pass = true;
    std::string detail;
    for (double sir : *config.sir_list)
    {
        const BerRecord &low = find(records, Method::svr, 30.0, sir, 0.05);
        const BerRecord &high = find(records, Method::svr, 30.0, sir, 0.2);
        pass = pass && low.frames == 40 && high.frames == 40 && low.ber <= high.ber;
        detail += fmt("%sSIR %g: p=0.05 %.4g, p=0.2 %.4g", detail.empty() ? "" : "; ", sir, low.ber, high.ber);
    }
    return {pass, detail};
}

// ---- 10 -----------------------------------------------------------------

Outcome determinism()
{
    ScenarioConfig config = paper_table3_preset();
    config.snr_list = {10.0, kNoNoise};
    config.sir_list = std::vector<double>{-5.0, 5.0};
    config.p_list = {0.1};
    config.frames_per_point = 3;
    config.master_seed = 77;
    std::ostringstream first, second;
    run_scenario(config, &first);
    run_scenario(config, &second);
    const bool same = first.str() == second.str();
    return {same && !first.str().empty(),
            fmt("%zu CSV bytes, runs %s", first.str().size(), same ? "byte-identical" : "differ")};
}

} // namespace

int main()
{
    struct Criterion
    {
        const char *id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1", "transform and loop identities", 1.0, transform_identities},
        {"2", "static-channel pilot oracle", 1.0, static_channel_oracle},
        {"3", "channel statistics", 120.0, channel_statistics},
        {"4", "noise calibration", 60.0, noise_calibration},
        {"5", "SVR solver oracle", 30.0, solver_oracle},
        {"6", "epsilon-Huber continuity", 1.0, huber_continuity},
        {"7", "BER ordering vs SNR, no impulse noise", 900.0, snr_ordering},
        {"8", "BER ordering vs SIR, p = 0.1", 900.0, sir_ordering},
        {"8m", "SVR BER monotone in SIR (7-point sweep)", 1.0, sir_monotone},
        {"9", "SVR BER: p = 0.05 not worse than p = 0.2 at low SIR", 600.0, impulse_rate_trend},
        {"10", "CSV determinism", 60.0, determinism},
    };

    int failures = 0;
    for (const Criterion &c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try
        {
            outcome = c.run();
        }
        catch (const std::exception &error)
        {
            outcome = {false, std::string("exception: ") + error.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed <= c.budget_s;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s criterion %s: %s | %s | %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    outcome.detail.c_str(), elapsed, c.budget_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
