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

#ifndef LTECHEST_ESTIMATORS_HPP
#define LTECHEST_ESTIMATORS_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltechest/grid.hpp"
#include "ltechest/svr.hpp"

namespace ltechest
{

enum class Method
{
    ls,
    decision_feedback,
    svr,
};

/// "ls", "df" or "svr".
std::string_view method_name(Method method);
Method parse_method(std::string_view name);

struct SolveStats
{
    std::size_t iterations = 0;
    double objective = 0.0;
    std::size_t support_vectors = 0;
};

struct ChannelEstimate
{
    ComplexGrid h_hat; ///< symbols_per_frame × occupied_subcarriers
    Method method = Method::ls;
    std::vector<SolveStats> diagnostics; ///< one entry per symbol, SVR only
};

/// Raised by frame estimators; carries the OFDM symbol that failed.
class EstimationError : public std::runtime_error
{
  public:
    EstimationError(const std::string &what, std::size_t symbol_index)
        : std::runtime_error(what), symbol_index_(symbol_index)
    {
    }

    std::size_t symbol_index() const { return symbol_index_; }

  private:
    std::size_t symbol_index_;
};

/// Ĥ^P(m) = Y_p(m)/X_p(m).
std::vector<Complex> ls_pilot_estimate(std::span<const Complex> received_pilots,
                                       std::span<const Complex> transmitted_pilots);

/// Linear interpolation over 0..length-1 from strictly increasing positions,
/// constant beyond the first and last position.
std::vector<Complex> linear_interpolate(std::span<const int> positions,
                                        std::span<const Complex> values, std::size_t length);

/// Received pilots of OFDM symbol `symbol` of a demodulated frame.
std::vector<Complex> received_pilots(const ComplexGrid &received, const OfdmConfig &config,
                                     std::size_t symbol);

/// LS on the pilots of one symbol, linear interpolation across subcarriers.
std::vector<Complex> ls_estimate_symbol(std::span<const Complex> received_row,
                                        const OfdmConfig &config, std::size_t symbol);

ChannelEstimate ls_estimate_frame(const ComplexGrid &received, const OfdmConfig &config);

struct DecisionFeedbackOptions
{
    /// Re-run pilot LS every `reanchor_period` symbols; 0 disables re-anchoring.
    std::size_t reanchor_period = 0;
};

/// Symbol 0 from pilot LS, then X̂ = Y/Ĥ_prev, hard decision X̃ (known pilot
/// on pilot cells), Ĥ = Y/X̃.
ChannelEstimate decision_feedback_estimate(const ComplexGrid &received, const OfdmConfig &config,
                                           const DecisionFeedbackOptions &options = {});

/// Per-symbol complex SVR interpolation of the pilot LS estimates.
ChannelEstimate svr_estimate_frame(const ComplexGrid &received, const OfdmConfig &config,
                                   const SvrHyperparams &params);

} // namespace ltechest

#endif
