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

#include <string>
#include <vector>

#include "sphericity/types.hpp"

/// Large-(n, m) expansions of the W0 moments and cumulants at fixed c = n/m.
///
/// For c in (0, 1):
///   ln E[W0^p] ~ sum_q A_{p,q}(c) / n^{2q},
///   E[W0^p]    ~ sum_j beta_{p,j}(c) / n^{2j},
///   kappa_p    ~ sum_j alpha_{p,j}(c) / n^{2(p-1+j)}.
///
/// For c = 1 the same structure holds in powers of 1/n, the cumulant
/// exponent is e(p) = 0 for p = 1 and p otherwise, and A_{p,2} contains
/// ln n, so the coefficients themselves depend on n.
namespace sphericity {

enum class ExpansionBranch { interior, unit_ratio };

/// A_{p,q}(c), c in (0, 1). Throws DomainError outside (0, 1).
double coeff_A(int p, int q, double c);

/// A_{p,q} on the c = 1 branch at size n.
double coeff_A_unit(int p, int q, int n);

double coeff_beta(int p, int j, double c);
double coeff_alpha(int p, int j, double c);

/// Tables A, beta, alpha for moment orders 1..P and J terms per cumulant.
class ExpansionCoefficients {
public:
    static ExpansionCoefficients interior(double c, int P, int J);
    static ExpansionCoefficients unit_ratio(int n, int P, int J);

    ExpansionBranch branch() const noexcept { return branch_; }
    int max_order() const noexcept { return P_; }
    int terms() const noexcept { return J_; }

    double A(int p, int q) const;
    double beta(int p, int j) const;
    double alpha(int p, int j) const;

    /// Series index of alpha_{p,0}: alpha_{p,j} multiplies n^{-step() (offset + j)}.
    int cumulant_offset(int p) const;
    /// Power of 1/n between consecutive terms of a series.
    int step() const noexcept { return branch_ == ExpansionBranch::interior ? 2 : 1; }

private:
    ExpansionCoefficients(ExpansionBranch branch, int P, int J) : branch_(branch), P_(P), J_(J) {}
    void build(const std::vector<std::vector<double>>& a_table);

    ExpansionBranch branch_;
    int P_;
    int J_;
    std::vector<std::vector<double>> a_;
    std::vector<std::vector<double>> beta_;
    std::vector<std::vector<double>> alpha_;
};

/// E[W0^p] from the first `terms` terms of the beta series.
double asymptotic_moment_w0(const DetectorDims& dims, int p, int terms = 2);

/// kappa_1 .. kappa_P of W0 (P <= 4 by default closed forms).
///
/// terms = 1 gives the leading-order closed forms; larger values sum the
/// alpha series through the recursion and attach a note. c = 1 is routed to
/// c1_cumulants_w0; m = n + 1 carries a degraded-accuracy note.
CumulantSet asymptotic_cumulants_w0(const DetectorDims& dims, int P = 4, int terms = 1);

/// kappa_1 ~ e, kappa_2 ~ e^2 (C + ln n) / n^2, kappa_p ~ e^p (p-1)! zeta(p-1) / n^p.
/// Requires n == m.
CumulantSet c1_cumulants_w0(const DetectorDims& dims, int P = 4, int terms = 1);

/// Limit law of n (W0 - mu_bar) as n, m grow with n/m -> c_bar: N(0, sigma2_bar).
struct GaussianLimit {
    double mu_bar;
    double sigma2_bar;
    double c_bar;
};

GaussianLimit gaussian_limit(double c_bar);

}  // namespace sphericity
