// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sphericity/curve.hpp"
#include "sphericity/distribution.hpp"

namespace sphericity {

enum class PfaMethod { exact, asymptotic, gaussian_limit };
enum class DesignMethod { full_correction, gaussian_limit };
enum class W1Source { exact, asymptotic_psi, asymptotic_psibar };

std::string_view to_string(PfaMethod method);
std::string_view to_string(DesignMethod method);
std::string_view to_string(W1Source source);

/// 1 - F_W0(eta). Correction methods use the monotone-repaired expansion;
/// gaussian_limit is 1 - Phi(n (eta - mu_bar) / sigma_bar).
Probability pfa(const DetectorDims& dims, double eta, PfaMethod method, int L = 2);

struct DesignSpec {
    explicit DesignSpec(DetectorDims d, double alpha = 0.01) : dims(d), alpha0(alpha) {}

    DetectorDims dims;
    double alpha0;
    DesignMethod method = DesignMethod::full_correction;
    CumulantMethod cumulants = CumulantMethod::asymptotic;
    int L = 2;
    W1Source w1_source = W1Source::asymptotic_psibar;

    /// Throws ValidityError unless alpha0 is in (0, 1).
    void validate() const;
};

struct ThresholdResult {
    double eta;
    double pfa;
    int iterations;
    bool widened;
    /// Thresholds where the unrepaired curve crosses alpha0.
    std::vector<double> raw_crossings;
};

/// Smallest eta with pfa(eta) <= alpha0 on the repaired curve, by bisection
/// in [kappa_1 - 10 sigma, kappa_1 + 10 sigma] (widened once to 20 sigma).
ThresholdResult design_threshold_full(const DesignSpec& spec);

/// mu_bar + sqrt(2 sigma2_bar) / n * erfinv(1 - 2 alpha0).
double design_threshold_gaussian(const DesignSpec& spec);

/// Dispatch on spec.method.
double design_threshold(const DesignSpec& spec);

/// 1 - F_W1(eta); L = 1 keeps only the kappa_3 correction, L = 2 (exact
/// cumulants only) adds kappa_4.
Probability pd_at(const DetectorDims& dims, const W1Input& channel, double eta,
                  CumulantMethod method, int L = 1);

/// P_FA over a threshold grid; values are non-increasing in eta.
CurveTable pfa_curve(const DetectorDims& dims, std::span<const double> eta_grid, PfaMethod method,
                     int L = 2);

/// P_D over a threshold grid; values are non-increasing in eta.
CurveTable pd_curve(const DetectorDims& dims, const W1Input& channel,
                    std::span<const double> eta_grid, CumulantMethod method, int L = 1);

/// 21 log-spaced false-alarm levels in [1e-3, 0.5].
std::vector<double> default_alpha_grid();

/// For each alpha: eta from the design rule of `spec`, then P_D at eta.
/// Rows are (alpha, P_D) with the threshold attached.
CurveTable roc(const DesignSpec& spec, std::span<const double> alpha_grid, const W1Input& channel,
               CumulantMethod w1_method, int w1_L = 1);

}  // namespace sphericity
