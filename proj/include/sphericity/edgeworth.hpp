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

#include <vector>

#include "sphericity/types.hpp"

namespace sphericity {

/// One solution of j_1 + 2 j_2 + ... + s j_s = s, with r = j_1 + ... + j_s.
struct PartitionSolution {
    std::vector<int> j;
    int r;
};

/// All solutions for s >= 1, ordered by decreasing j_1, then j_2, ...
std::vector<PartitionSolution> partition_solutions(int s);

/// CDF value as evaluated (`raw`) and clamped to [0, 1] (`value`).
struct Probability {
    double value;
    double raw;
};

/// L-term Edgeworth expansion of a CDF from its cumulants:
///
///   F(x) = Phi(t) - phi(t) sum_{s=1}^{L} sum_{J_s} He_{s+2r-1}(t)
///          prod_l (1/j_l!) (kappa_{l+2} / ((l+2)! sigma^{l+2}))^{j_l},
///
/// t = (x - kappa_1) / sigma. The terms are collapsed once into a
/// coefficient per Hermite degree.
class EdgeworthSeries {
public:
    /// Throws DomainError when sigma <= 0 and ValidityError when fewer than
    /// L + 2 cumulants are supplied (L >= 1).
    EdgeworthSeries(CumulantSet cumulants, int L);

    int order() const noexcept { return L_; }
    const CumulantSet& cumulants() const noexcept { return cumulants_; }
    double standardize(double x) const noexcept;

    /// Truncated series, unclamped.
    double raw_cdf(double x) const;

    /// Raw value and its clamp to [0, 1].
    Probability cdf(double x) const;

    /// Running maximum of the raw series from -infinity, clamped. Exactly
    /// non-decreasing in x up to the accuracy of the located critical points.
    Probability repaired_cdf(double x) const;

    /// Real stationary points of the raw series, in x units, ascending.
    const std::vector<double>& stationary_points() const noexcept { return critical_x_; }

    /// Coefficient d_h of phi(t) He_h(t) in the correction sum; index h.
    const std::vector<double>& hermite_coefficients() const noexcept { return d_; }

private:
    double raw_standard(double t) const;

    CumulantSet cumulants_;
    int L_;
    std::vector<double> d_;
    std::vector<double> critical_x_;
    std::vector<double> critical_f_;
};

/// Closed-form L = 2 expansion at standardized argument x:
/// Phi(x) - sqrt(2/pi) e^{-x^2/2} / (12 sigma^3) * [k3 (x^2 - 1)
///   + k4 / (4 sigma) x (x^2 - 3) + k3^2 / (12 sigma^3) x (x^4 - 10 x^2 + 15)].
double correction_G(double x, double sigma, double k3, double k4);

}  // namespace sphericity
