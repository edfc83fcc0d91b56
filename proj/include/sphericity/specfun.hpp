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

#include <cstdint>

/// Scalar special functions used by the moment, expansion and design code.
///
/// Everything here is pure and stateless. Gamma is only ever exposed in the
/// log domain: the statistic's moments involve Gamma functions of arguments
/// of order m*n, which overflow a double long before the ratios do.
namespace sphericity::specfun {

/// ln Gamma(x) for x > 0. Throws DomainError for non-positive or
/// non-finite x.
double log_gamma(double x);

/// ln Gamma(x + t) - ln Gamma(x), evaluated without forming the two large
/// log-gamma values when x is large. Requires x > 0 and x + t > 0.
double log_gamma_ratio(double x, double t);

/// Riemann zeta at an integer argument s >= 2.
double zeta_int(int s);

/// Bernoulli number B_k for even k in [2, 40].
///
/// `exact` is false for B_36 and B_40, whose numerators exceed 64 bits; for
/// those only the correctly rounded `value` is available.
struct BernoulliNumber {
    bool exact;
    std::int64_t numerator;
    std::int64_t denominator;
    double value;
};

BernoulliNumber bernoulli(int k);

/// Generalized harmonic number H_{p,b} = sum_{j=1}^{p} j^{-b}.
/// Negative orders give power sums: H_{p,-q} = sum j^q.
double gen_harmonic(int p, int order);

/// Chebyshev-Hermite (probabilists') polynomial He_ell(z).
double hermite_che(int ell, double z);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Inverse error function on (-1, 1).
double erf_inv(double y);

/// Euler-Mascheroni constant.
constexpr double euler_gamma() { return 0.57721566490153286060651209008240243; }

}  // namespace sphericity::specfun
