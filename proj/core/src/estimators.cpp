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
#include <stdexcept>
#include <string>

#include "ltechest/estimators.hpp"

namespace ltechest
{
namespace
{

ComplexGrid empty_estimate(const ComplexGrid &received, const OfdmConfig &config)
{
    config.validate();
    if (received.rows() != static_cast<Eigen::Index>(config.symbols_per_frame) ||
        received.cols() != static_cast<Eigen::Index>(config.occupied_subcarriers))
        throw std::invalid_argument("received grid shape does not match the OFDM configuration");
    return ComplexGrid(received.rows(), received.cols());
}

void store_row(ComplexGrid &grid, Eigen::Index row, const std::vector<Complex> &values)
{
    std::copy(values.begin(), values.end(), row_span(grid, row).begin());
}

} // namespace

std::string_view method_name(Method method)
{
    switch (method)
    {
    case Method::ls:
        return "ls";
    case Method::decision_feedback:
        return "df";
    case Method::svr:
        return "svr";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    if (name == "ls")
        return Method::ls;
    if (name == "df")
        return Method::decision_feedback;
    if (name == "svr")
        return Method::svr;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected ls, df or svr)");
}

std::vector<Complex> ls_pilot_estimate(std::span<const Complex> received_pilots,
                                       std::span<const Complex> transmitted_pilots)
{
    if (received_pilots.size() != transmitted_pilots.size())
        throw std::invalid_argument("received and transmitted pilot counts differ");
    std::vector<Complex> estimate(received_pilots.size());
    for (std::size_t m = 0; m < estimate.size(); ++m)
    {
        if (transmitted_pilots[m] == Complex{})
            throw std::invalid_argument("zero pilot symbol at index " + std::to_string(m));
        estimate[m] = received_pilots[m] / transmitted_pilots[m];
    }
    return estimate;
}

std::vector<Complex> linear_interpolate(std::span<const int> positions, std::span<const Complex> values,
                                        std::size_t length)
{
    if (positions.empty() || positions.size() != values.size())
        throw std::invalid_argument("interpolation needs matching, nonempty positions and values");

    std::vector<Complex> out(length);
    std::size_t segment = 0;
    for (std::size_t k = 0; k < length; ++k)
    {
        const auto x = static_cast<int>(k);
        if (x <= positions.front())
        {
            out[k] = values.front();
            continue;
        }
        if (x >= positions.back())
        {
            out[k] = values.back();
            continue;
        }
        while (positions[segment + 1] <= x)
            ++segment;
        const double t = static_cast<double>(x - positions[segment]) /
                         static_cast<double>(positions[segment + 1] - positions[segment]);
        out[k] = values[segment] + t * (values[segment + 1] - values[segment]);
    }
    return out;
}

std::vector<Complex> received_pilots(const ComplexGrid &received, const OfdmConfig &config, std::size_t symbol)
{
    std::vector<Complex> pilots(config.pilot_count());
    const auto row = static_cast<Eigen::Index>(symbol);
    for (std::size_t m = 0; m < pilots.size(); ++m)
        pilots[m] = received(row, static_cast<Eigen::Index>(m * config.pilot_spacing));
    return pilots;
}

std::vector<Complex> ls_estimate_symbol(std::span<const Complex> received_row, const OfdmConfig &config,
                                        std::size_t symbol)
{
    std::vector<Complex> y_p(config.pilot_count());
    for (std::size_t m = 0; m < y_p.size(); ++m)
        y_p[m] = received_row[m * config.pilot_spacing];
    const std::vector<Complex> h_p = ls_pilot_estimate(y_p, pilot_symbols(config, symbol));
    const std::vector<int> positions = config.pilot_positions();
    return linear_interpolate(positions, h_p, config.occupied_subcarriers);
}

ChannelEstimate ls_estimate_frame(const ComplexGrid &received, const OfdmConfig &config)
{
    ChannelEstimate estimate{empty_estimate(received, config), Method::ls, {}};
    for (Eigen::Index s = 0; s < received.rows(); ++s)
        store_row(estimate.h_hat, s, ls_estimate_symbol(row_span(received, s), config, static_cast<std::size_t>(s)));
    return estimate;
}

ChannelEstimate decision_feedback_estimate(const ComplexGrid &received, const OfdmConfig &config,
                                           const DecisionFeedbackOptions &options)
{
    ChannelEstimate estimate{empty_estimate(received, config), Method::decision_feedback, {}};
    std::vector<Complex> previous = ls_estimate_symbol(row_span(received, 0), config, 0);
    store_row(estimate.h_hat, 0, previous);

    std::vector<Complex> current(config.occupied_subcarriers);
    for (std::size_t s = 1; s < config.symbols_per_frame; ++s)
    {
        const auto row = static_cast<Eigen::Index>(s);
        if (options.reanchor_period != 0 && s % options.reanchor_period == 0)
        {
            current = ls_estimate_symbol(row_span(received, row), config, s);
        }
        else
        {
            for (std::size_t k = 0; k < config.occupied_subcarriers; ++k)
            {
                const Complex y = received(row, static_cast<Eigen::Index>(k));
                const Complex decided =
                    config.is_pilot(k)
                        ? pilot_symbol(config, s, k / config.pilot_spacing)
                        : nearest_constellation_point(y / clamp_channel(previous[k]), config.modulation_order);
                current[k] = y / decided;
            }
        }
        store_row(estimate.h_hat, row, current);
        std::swap(previous, current);
    }
    return estimate;
}

ChannelEstimate svr_estimate_frame(const ComplexGrid &received, const OfdmConfig &config,
                                   const SvrHyperparams &params)
{
    params.validate();
    ChannelEstimate estimate{empty_estimate(received, config), Method::svr, {}};
    estimate.diagnostics.reserve(config.symbols_per_frame);

    PilotObservations observations;
    observations.positions = config.pilot_positions();
    const Eigen::MatrixXd gram = gram_matrix(observations.positions, params.kernel_sigma);

    // Kernel between every occupied subcarrier and every pilot; fixed for the frame.
    const auto occupied = static_cast<Eigen::Index>(config.occupied_subcarriers);
    const auto pilots = static_cast<Eigen::Index>(observations.positions.size());
    Eigen::MatrixXd interpolation(occupied, pilots);
    for (Eigen::Index k = 0; k < occupied; ++k)
        for (Eigen::Index m = 0; m < pilots; ++m)
            interpolation(k, m) = rbf_kernel(static_cast<double>(k),
                                             observations.positions[static_cast<std::size_t>(m)], params.kernel_sigma);

    Eigen::VectorXd psi_re(pilots), psi_im(pilots);
    for (std::size_t s = 0; s < config.symbols_per_frame; ++s)
    {
        observations.values = ls_pilot_estimate(received_pilots(received, config, s), pilot_symbols(config, s));
        DualSolution solution;
        try
        {
            solution = solve_dual(gram, observations, params);
        }
        catch (const SolverError &error)
        {
            throw EstimationError("SVR estimation failed at OFDM symbol " + std::to_string(s) + ": " + error.what(),
                                  s);
        }

        for (Eigen::Index m = 0; m < pilots; ++m)
        {
            psi_re(m) = solution.psi[static_cast<std::size_t>(m)].real();
            psi_im(m) = solution.psi[static_cast<std::size_t>(m)].imag();
        }
        const Eigen::VectorXd h_re = interpolation * psi_re;
        const Eigen::VectorXd h_im = interpolation * psi_im;
        const auto row = static_cast<Eigen::Index>(s);
        for (Eigen::Index k = 0; k < occupied; ++k)
            estimate.h_hat(row, k) = Complex(h_re(k), h_im(k)) + solution.bias;

        estimate.diagnostics.push_back({solution.iterations_used, solution.final_objective,
                                        solution.support_vectors()});
    }
    return estimate;
}

} // namespace ltechest
