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

// Complex SVR dual solver.
//
// With ψ = a_R + j·a_I and G real symmetric, the dual objective splits into
//
//   Σ_{x ∈ {R, I}}  −½ a_xᵀ Q a_x + a_xᵀ y_x − ε‖a_x‖₁,   Q = G + γI,
//
// subject to −C ≤ a_x ≤ C, where at the optimum α_x = max(a_x, 0) and
// α*_x = max(−a_x, 0). Each half is solved on its own.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "ltechest/svr.hpp"

namespace ltechest
{
namespace
{

struct ComponentResult
{
    Eigen::VectorXd a;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

double soft_threshold(double x, double threshold)
{
    if (x > threshold)
        return x - threshold;
    if (x < -threshold)
        return x + threshold;
    return 0.0;
}

double component_objective(const Eigen::MatrixXd &q, const Eigen::VectorXd &y, const Eigen::VectorXd &a,
                           double epsilon)
{
    return -0.5 * a.dot(q * a) + a.dot(y) - epsilon * a.lpNorm<1>();
}

double kkt_of(const Eigen::VectorXd &a, const Eigen::VectorXd &g, double epsilon, double c)
{
    return kkt_violation(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                         std::span<const double>(g.data(), static_cast<std::size_t>(g.size())), epsilon, c);
}

class ComponentSolver
{
  public:
    ComponentSolver(const Eigen::MatrixXd &q, Eigen::VectorXd y, const SvrHyperparams &params,
                    SolverTrace *trace, double objective_offset)
        : q_(q), y_(std::move(y)), epsilon_(params.epsilon), c_(params.c), tolerance_(params.solver_tolerance),
          trace_(trace), objective_offset_(objective_offset)
    {
    }

    ComponentResult solve(std::size_t budget)
    {
        const Eigen::Index n = y_.size();
        ComponentResult result;
        result.a = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd &a = result.a;
        Eigen::VectorXd g = y_;

        result.residual = kkt_of(a, g, epsilon_, c_);
        while (result.residual > tolerance_)
        {
            if (result.iterations >= budget)
                return result;

            coordinate_sweep(a, g);
            result.iterations += static_cast<std::size_t>(n);
            g.noalias() = y_ - q_ * a;
            record(a);
            result.residual = kkt_of(a, g, epsilon_, c_);
            if (result.residual <= tolerance_)
                break;

            // Each truncated step pins one more variable, so at most n steps.
            for (Eigen::Index step = 0; step < n; ++step)
            {
                const bool reached_face_optimum = free_set_step(a, g);
                result.iterations += static_cast<std::size_t>(n);
                g.noalias() = y_ - q_ * a;
                record(a);
                if (reached_face_optimum)
                    break;
            }
            result.residual = kkt_of(a, g, epsilon_, c_);
        }
        result.converged = true;
        return result;
    }

  private:
    // One pass of exact 1-D maximization per coordinate, clipped to [−C, C].
    void coordinate_sweep(Eigen::VectorXd &a, Eigen::VectorXd &g) const
    {
        for (Eigen::Index m = 0; m < a.size(); ++m)
        {
            const double qmm = q_(m, m);
            const double unconstrained = soft_threshold(g(m) + qmm * a(m), epsilon_) / qmm;
            const double next = std::clamp(unconstrained, -c_, c_);
            const double delta = next - a(m);
            if (delta != 0.0)
            {
                a(m) = next;
                g.noalias() -= delta * q_.col(m);
            }
        }
    }

    // Newton step on the variables strictly inside (−C, 0) ∪ (0, C), holding
    // their signs. The objective restricted to that face is a concave
    // quadratic, so moving towards its maximizer never decreases it. The step
    // stops at the first variable that would cross zero or the box; that
    // variable is pinned. Returns true when the full step was taken.
    bool free_set_step(Eigen::VectorXd &a, const Eigen::VectorXd &g) const
    {
        std::vector<Eigen::Index> free;
        for (Eigen::Index m = 0; m < a.size(); ++m)
            if (a(m) != 0.0 && std::abs(a(m)) < c_)
                free.push_back(m);
        if (free.empty())
            return true;

        const auto f = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd q_ff(f, f);
        Eigen::VectorXd rhs(f);
        for (Eigen::Index i = 0; i < f; ++i)
        {
            const Eigen::Index mi = free[static_cast<std::size_t>(i)];
            rhs(i) = g(mi) - epsilon_ * (a(mi) > 0.0 ? 1.0 : -1.0);
            for (Eigen::Index j = 0; j < f; ++j)
                q_ff(i, j) = q_(mi, free[static_cast<std::size_t>(j)]);
        }
        const Eigen::VectorXd direction = q_ff.llt().solve(rhs);

        double step = 1.0;
        Eigen::Index blocking = -1;
        double pinned_value = 0.0;
        for (Eigen::Index i = 0; i < f; ++i)
        {
            const Eigen::Index m = free[static_cast<std::size_t>(i)];
            const double d = direction(i);
            const double target = a(m) + d;
            double limit = 1.0;
            double bound = 0.0;
            if (a(m) > 0.0)
            {
                if (target < 0.0)
                    limit = a(m) / -d, bound = 0.0;
                else if (target > c_)
                    limit = (c_ - a(m)) / d, bound = c_;
            }
            else
            {
                if (target > 0.0)
                    limit = -a(m) / d, bound = 0.0;
                else if (target < -c_)
                    limit = (-c_ - a(m)) / d, bound = -c_;
            }
            if (limit < step)
            {
                step = limit;
                blocking = m;
                pinned_value = bound;
            }
        }

        for (Eigen::Index i = 0; i < f; ++i)
            a(free[static_cast<std::size_t>(i)]) += step * direction(i);
        if (blocking >= 0)
            a(blocking) = pinned_value;
        return blocking < 0;
    }

    void record(const Eigen::VectorXd &a) const
    {
        if (trace_)
            trace_->objective.push_back(objective_offset_ + component_objective(q_, y_, a, epsilon_));
    }

    const Eigen::MatrixXd &q_;
    Eigen::VectorXd y_;
    double epsilon_;
    double c_;
    double tolerance_;
    SolverTrace *trace_;
    double objective_offset_;
};

void fill_multipliers(const Eigen::VectorXd &a, std::vector<double> &alpha, std::vector<double> &alpha_star)
{
    alpha.resize(static_cast<std::size_t>(a.size()));
    alpha_star.resize(static_cast<std::size_t>(a.size()));
    for (Eigen::Index m = 0; m < a.size(); ++m)
    {
        alpha[static_cast<std::size_t>(m)] = a(m) > 0.0 ? a(m) : 0.0;
        alpha_star[static_cast<std::size_t>(m)] = a(m) < 0.0 ? -a(m) : 0.0;
    }
}

double quadratic_zone_mean(const Eigen::VectorXd &residual, const SvrHyperparams &params)
{
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index m = 0; m < residual.size(); ++m)
    {
        const double r = std::abs(residual(m));
        if (r > params.epsilon && r < params.ec())
        {
            sum += residual(m);
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

} // namespace

double kkt_violation(std::span<const double> a, std::span<const double> gradient, double epsilon, double c)
{
    double worst = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m)
    {
        const double g = gradient[m];
        double violation;
        if (a[m] == 0.0)
            violation = std::max(0.0, std::abs(g) - epsilon);
        else if (a[m] >= c)
            violation = std::max(0.0, epsilon - g);
        else if (a[m] <= -c)
            violation = std::max(0.0, g + epsilon);
        else if (a[m] > 0.0)
            violation = std::abs(g - epsilon);
        else
            violation = std::abs(g + epsilon);
        worst = std::max(worst, violation);
    }
    return worst;
}

DualSolution solve_dual(const Eigen::MatrixXd &gram, const PilotObservations &observations,
                        const SvrHyperparams &params, SolverTrace *trace)
{
    params.validate();
    const auto n = static_cast<Eigen::Index>(observations.values.size());
    if (gram.rows() != n || gram.cols() != n)
        throw std::invalid_argument("Gram matrix is " + std::to_string(gram.rows()) + "x" +
                                    std::to_string(gram.cols()) + " but there are " + std::to_string(n) +
                                    " observations");
    if (n == 0)
        throw std::invalid_argument("no pilot observations");

    Eigen::MatrixXd q = gram;
    q.diagonal().array() += params.gamma;

    Eigen::VectorXd y_re(n), y_im(n);
    for (Eigen::Index m = 0; m < n; ++m)
    {
        y_re(m) = observations.values[static_cast<std::size_t>(m)].real();
        y_im(m) = observations.values[static_cast<std::size_t>(m)].imag();
    }

    const std::size_t budget =
        params.max_iterations != 0 ? params.max_iterations : static_cast<std::size_t>(10000) * static_cast<std::size_t>(n);

    ComponentResult re = ComponentSolver(q, y_re, params, trace, 0.0).solve(budget);
    const double re_objective = component_objective(q, y_re, re.a, params.epsilon);
    ComponentResult im;
    if (re.converged)
        im = ComponentSolver(q, y_im, params, trace, re_objective).solve(budget - std::min(budget, re.iterations));
    else
    {
        im.a = Eigen::VectorXd::Zero(n);
        im.residual = kkt_of(im.a, y_im, params.epsilon, params.c);
    }

    DualSolution solution;
    solution.psi.resize(static_cast<std::size_t>(n));
    for (Eigen::Index m = 0; m < n; ++m)
        solution.psi[static_cast<std::size_t>(m)] = {re.a(m), im.a(m)};
    fill_multipliers(re.a, solution.alpha_re, solution.alpha_re_star);
    fill_multipliers(im.a, solution.alpha_im, solution.alpha_im_star);
    solution.iterations_used = re.iterations + im.iterations;
    solution.kkt_residual = std::max(re.residual, im.residual);
    solution.final_objective = re_objective + component_objective(q, y_im, im.a, params.epsilon);

    if (!re.converged || !im.converged)
    {
        throw SolverError("SVR dual solver did not converge within " + std::to_string(budget) +
                              " iterations (KKT residual " + std::to_string(solution.kkt_residual) + ")",
                          std::move(solution));
    }

    if (params.bias == BiasMode::mean_residual)
    {
        const Eigen::VectorXd r_re = y_re - gram * re.a;
        const Eigen::VectorXd r_im = y_im - gram * im.a;
        solution.bias = {quadratic_zone_mean(r_re, params), quadratic_zone_mean(r_im, params)};
    }
    return solution;
}

} // namespace ltechest
