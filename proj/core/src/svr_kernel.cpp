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
#include <limits>
#include <stdexcept>
#include <string>

#include "ltechest/svr.hpp"

namespace ltechest
{

void SvrHyperparams::validate() const
{
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("epsilon must be nonnegative");
    if (!(gamma > 0.0))
        throw std::invalid_argument("gamma must be positive");
    if (!(c > 0.0))
        throw std::invalid_argument("C must be positive");
    if (!(kernel_sigma > 0.0))
        throw std::invalid_argument("kernel sigma must be positive");
    if (!(solver_tolerance > 0.0))
        throw std::invalid_argument("solver tolerance must be positive");
}

SvrHyperparams SvrHyperparams::defaults_for_spacing(std::size_t pilot_spacing)
{
    SvrHyperparams params;
    params.kernel_sigma = 2.0 * static_cast<double>(pilot_spacing);
    return params;
}

void PilotObservations::validate() const
{
    if (positions.size() != values.size())
        throw std::invalid_argument("pilot positions and values differ in length");
    if (positions.size() < 2)
        throw std::invalid_argument("at least two pilots are required");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (positions[i] <= positions[i - 1])
            throw std::invalid_argument("pilot positions must be strictly increasing");
}

std::size_t DualSolution::support_vectors() const
{
    std::size_t count = 0;
    for (std::size_t m = 0; m < psi.size(); ++m)
        if (alpha_re[m] != 0.0 || alpha_re_star[m] != 0.0 || alpha_im[m] != 0.0 || alpha_im_star[m] != 0.0)
            ++count;
    return count;
}

double rbf_kernel(double u, double v, double sigma)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("RBF kernel sigma must be positive");
    const double d = u - v;
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

Eigen::MatrixXd gram_matrix(std::span<const int> positions, double sigma)
{
    const auto n = static_cast<Eigen::Index>(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (positions[i] == positions[j])
                throw std::invalid_argument("duplicate pilot position " + std::to_string(positions[i]));

    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index u = 0; u < n; ++u)
    {
        gram(u, u) = 1.0;
        for (Eigen::Index v = u + 1; v < n; ++v)
        {
            const double k = rbf_kernel(positions[static_cast<std::size_t>(u)],
                                        positions[static_cast<std::size_t>(v)], sigma);
            gram(u, v) = k;
            gram(v, u) = k;
        }
    }
    return gram;
}

double epsilon_huber_cost(double residual, const SvrHyperparams &params)
{
    const double magnitude = std::abs(residual);
    if (magnitude <= params.epsilon)
        return 0.0;
    if (magnitude <= params.ec())
    {
        const double excess = magnitude - params.epsilon;
        return excess * excess / (2.0 * params.gamma);
    }
    return params.c * (magnitude - params.epsilon) - 0.5 * params.gamma * params.c * params.c;
}

double epsilon_huber_cost(Complex residual, const SvrHyperparams &params)
{
    return epsilon_huber_cost(residual.real(), params) + epsilon_huber_cost(residual.imag(), params);
}

namespace
{

void split(const std::vector<Complex> &psi, Eigen::VectorXd &re, Eigen::VectorXd &im)
{
    const auto n = static_cast<Eigen::Index>(psi.size());
    re.resize(n);
    im.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        re(i) = psi[static_cast<std::size_t>(i)].real();
        im(i) = psi[static_cast<std::size_t>(i)].imag();
    }
}

} // namespace

double dual_objective(const Eigen::MatrixXd &gram, std::span<const Complex> targets,
                      const DualSolution &solution, const SvrHyperparams &params)
{
    Eigen::VectorXd a_re, a_im;
    split(solution.psi, a_re, a_im);
    const Eigen::VectorXd q_re = gram * a_re + params.gamma * a_re;
    const Eigen::VectorXd q_im = gram * a_im + params.gamma * a_im;

    double linear = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t m = 0; m < targets.size(); ++m)
    {
        linear += a_re(static_cast<Eigen::Index>(m)) * targets[m].real() +
                  a_im(static_cast<Eigen::Index>(m)) * targets[m].imag();
        alpha_sum +=
            solution.alpha_re[m] + solution.alpha_re_star[m] + solution.alpha_im[m] + solution.alpha_im_star[m];
    }
    return -0.5 * (a_re.dot(q_re) + a_im.dot(q_im)) + linear - params.epsilon * alpha_sum;
}

double primal_cost(const Eigen::MatrixXd &gram, std::span<const Complex> targets, const DualSolution &solution,
                   const SvrHyperparams &params)
{
    Eigen::VectorXd a_re, a_im;
    split(solution.psi, a_re, a_im);
    const Eigen::VectorXd f_re = gram * a_re;
    const Eigen::VectorXd f_im = gram * a_im;

    double cost = 0.5 * (a_re.dot(f_re) + a_im.dot(f_im));
    for (std::size_t m = 0; m < targets.size(); ++m)
    {
        const auto i = static_cast<Eigen::Index>(m);
        const Complex residual = targets[m] - Complex(f_re(i), f_im(i)) - solution.bias;
        cost += epsilon_huber_cost(residual, params);
    }
    return cost;
}

Complex predict(const DualSolution &solution, std::span<const int> positions, double query, double sigma)
{
    if (positions.size() != solution.psi.size())
        throw std::invalid_argument("solution and positions differ in length");
    Complex value = solution.bias;
    for (std::size_t m = 0; m < positions.size(); ++m)
        value += solution.psi[m] * rbf_kernel(positions[m], query, sigma);
    return value;
}

TuningResult grid_search(std::span<const PilotObservations> training, std::span<const SvrHyperparams> candidates)
{
    if (candidates.empty())
        throw std::invalid_argument("grid search needs at least one candidate");
    if (training.empty())
        throw std::invalid_argument("grid search needs training observations");

    TuningResult result;
    result.best_mse = std::numeric_limits<double>::infinity();
    result.best = candidates.front();
    for (const SvrHyperparams &candidate : candidates)
    {
        double error = 0.0;
        std::size_t count = 0;
        try
        {
            for (const PilotObservations &set : training)
            {
                set.validate();
                PilotObservations fit;
                std::vector<std::size_t> held_out;
                for (std::size_t m = 0; m < set.size(); ++m)
                {
                    if (m % 2 == 0)
                    {
                        fit.positions.push_back(set.positions[m]);
                        fit.values.push_back(set.values[m]);
                    }
                    else
                    {
                        held_out.push_back(m);
                    }
                }
                if (fit.size() < 2 || held_out.empty())
                    throw std::invalid_argument("grid search needs at least 3 pilots per set");
                const Eigen::MatrixXd gram = gram_matrix(fit.positions, candidate.kernel_sigma);
                const DualSolution solution = solve_dual(gram, fit, candidate);
                for (std::size_t m : held_out)
                {
                    const Complex estimate =
                        predict(solution, fit.positions, set.positions[m], candidate.kernel_sigma);
                    error += std::norm(estimate - set.values[m]);
                    ++count;
                }
            }
        }
        catch (const SolverError &)
        {
            error = std::numeric_limits<double>::infinity();
            count = 1;
        }
        const double mse = error / static_cast<double>(count);
        result.candidate_mse.push_back(mse);
        if (mse < result.best_mse)
        {
            result.best_mse = mse;
            result.best = candidate;
        }
    }
    return result;
}

} // namespace ltechest
