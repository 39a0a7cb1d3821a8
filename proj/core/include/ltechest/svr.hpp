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

#ifndef LTECHEST_SVR_HPP
#define LTECHEST_SVR_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ltechest/grid.hpp"

namespace ltechest
{

enum class BiasMode
{
    none,          ///< b = 0
    mean_residual, ///< b = mean residual over pilots in the quadratic cost zone
};

/// Parameters of the ε-Huber cost, the RBF kernel and the dual solver.
struct SvrHyperparams
{
    double epsilon = 1e-3;
    double gamma = 1e-2;
    double c = 1e2;
    double kernel_sigma = 12.0; ///< in subcarrier-index units
    double solver_tolerance = 1e-8;
    std::size_t max_iterations = 0; ///< 0 selects 10^4·N_p
    BiasMode bias = BiasMode::none;

    /// Start of the linear cost zone, ε + γC.
    double ec() const { return epsilon + gamma * c; }

    void validate() const;

    /// Library defaults with σ = 2·ΔP.
    static SvrHyperparams defaults_for_spacing(std::size_t pilot_spacing);
};

/// Pilot-position channel observations Ĥ^P of one OFDM symbol.
struct PilotObservations
{
    std::vector<int> positions;
    std::vector<Complex> values;

    void validate() const;
    std::size_t size() const { return positions.size(); }
};

/// Solved dual variables. ψ_m = (α_R − α*_R) + j(α_I − α*_I).
struct DualSolution
{
    std::vector<Complex> psi;
    Complex bias{0.0, 0.0};
    std::vector<double> alpha_re;
    std::vector<double> alpha_re_star;
    std::vector<double> alpha_im;
    std::vector<double> alpha_im_star;
    std::size_t iterations_used = 0;
    double final_objective = 0.0;
    double kkt_residual = 0.0;

    /// Pilots with any nonzero multiplier.
    std::size_t support_vectors() const;
};

/// Thrown when the dual solver exhausts max_iterations.
class SolverError : public std::runtime_error
{
  public:
    SolverError(const std::string &what, DualSolution last_iterate)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate))
    {
    }

    const DualSolution &last_iterate() const { return last_iterate_; }
    double residual() const { return last_iterate_.kkt_residual; }

  private:
    DualSolution last_iterate_;
};

/// exp(−(u−v)²/(2σ²)).
double rbf_kernel(double u, double v, double sigma);

/// G(u,v) = K(P_u, P_v). Positions must be distinct.
Eigen::MatrixXd gram_matrix(std::span<const int> positions, double sigma);

/// Three-zone ε-Huber cost of a real residual.
double epsilon_huber_cost(double residual, const SvrHyperparams &params);

/// Cost of a complex residual: L(Re e) + L(Im e).
double epsilon_huber_cost(Complex residual, const SvrHyperparams &params);

/// −½ψᴴ(G+γI)ψ + Re(ψᴴY) − ε·Σ(α_R + α*_R + α_I + α*_I).
double dual_objective(const Eigen::MatrixXd &gram, std::span<const Complex> targets,
                      const DualSolution &solution, const SvrHyperparams &params);

/// ½ψᴴGψ + Σ_m L(e_m) with e_m = Y_m − Σ_n ψ_n G(m,n) − b.
double primal_cost(const Eigen::MatrixXd &gram, std::span<const Complex> targets,
                   const DualSolution &solution, const SvrHyperparams &params);

/// Optional per-step record of the dual objective, for diagnostics.
struct SolverTrace
{
    std::vector<double> objective;
};

/// Maximizes the complex SVR dual over the box 0 ≤ α ≤ C.
///
/// The real and imaginary parts decouple (G is real symmetric), so each is a
/// box-constrained QP in a = α − α*. Each is solved by projected coordinate
/// ascent, interleaved with a Newton step on the current free set that is
/// truncated at the first sign or box change; both moves never decrease the
/// objective. Stops once the KKT residual is at most solver_tolerance.
DualSolution solve_dual(const Eigen::MatrixXd &gram, const PilotObservations &observations,
                        const SvrHyperparams &params, SolverTrace *trace = nullptr);

/// Ĥ(k) = Σ_m ψ_m K(P_m, k) + b.
Complex predict(const DualSolution &solution, std::span<const int> positions, double query,
                double sigma);

/// KKT violation of a real-valued multiplier vector `a` with gradient `g = y − Qa`.
double kkt_violation(std::span<const double> a, std::span<const double> gradient, double epsilon,
                     double c);

// ---- hyperparameter selection -------------------------------------------

struct TuningResult
{
    SvrHyperparams best;
    double best_mse = 0.0;
    std::vector<double> candidate_mse;
};

/// Scores each candidate by training on even-indexed pilots and predicting
/// the odd-indexed (held-out) pilots of every observation set.
TuningResult grid_search(std::span<const PilotObservations> training,
                         std::span<const SvrHyperparams> candidates);

} // namespace ltechest

#endif
