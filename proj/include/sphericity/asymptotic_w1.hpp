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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sphericity/types.hpp"

/// Asymptotic W1 cumulants driven by four spectral summaries of
/// HH^dagger + N0 I,
///
///   Psi_1 = prod_i y_i^{-1/n},   Psi_{l+1} = (1/n) sum_i y_i^l,
///
/// and channel-free deterministic equivalents of those summaries for IID and
/// unequal-variance channels.
///
/// The equivalents are derived for entries of variance 1/n. Under the unit
/// convention the eigenvalues of HH^dagger are n times larger, so the
/// summaries are computed at noise N0/n and rescaled by (1/n, n, n^2, n^3).
namespace sphericity {

enum class PsiProvenance { from_eigenvalues, deterministic_equivalent };

std::string_view to_string(PsiProvenance provenance);

struct PsiSummaries {
    double psi1;
    double psi2;
    double psi3;
    double psi4;
    PsiProvenance provenance;

    std::array<double, 4> values() const { return {psi1, psi2, psi3, psi4}; }
};

PsiSummaries psi_from_eigenvalues(const ChannelSpectrum& spectrum);

/// |Psi_l - Psibar_l| for l = 1..4.
std::array<double, 4> psi_gap(const PsiSummaries& a, const PsiSummaries& b);

/// Leading-order kappa_1..kappa_P (P in {2, 3}) of W1. Throws
/// UnsupportedError for c = 1.
CumulantSet w1_cumulants_asymptotic(const DetectorDims& dims, const PsiSummaries& psi, int P = 3);

enum class ChannelKind { iid, unequal_variances };
enum class VarianceConvention { unit, one_over_n };

std::string_view to_string(ChannelKind kind);
std::string_view to_string(VarianceConvention convention);

/// Statistical model of H (n x k): IID entries, or IID entries times
/// diag(sigma2)^{1/2}. beta = k / n.
struct ChannelModel {
    ChannelKind kind = ChannelKind::iid;
    double beta = 1.0;
    double n0 = 1.0;
    std::vector<double> sigma2;
    VarianceConvention convention = VarianceConvention::unit;

    static ChannelModel iid(double beta, double n0, VarianceConvention convention);
    static ChannelModel unequal(double beta, double n0, std::vector<double> sigma2,
                                VarianceConvention convention);

    /// Throws ValidityError on beta < 1, n0 <= 0 or a bad profile.
    void validate() const;
};

/// Marchenko-Pastur moment (1/r) sum_{i=1}^r C(r, i) C(r, i-1) beta^i.
double mp_moment(int r, double beta);

/// xi(r_1, ..., r_i) = r! / ((r - i + 1)! f_1! ... f_r!), r = sum r_j.
double xi_coefficient(const std::vector<int>& parts);

/// Limiting (1/n) Tr((HH^dagger)^r) for H = H_iid diag(sigma2)^{1/2},
/// k = sigma2.size().
double mp_moment_unequal(int r, double beta, const std::vector<double>& sigma2);

struct FixedPoint {
    double delta;
    double delta_tilde;
    int iterations;
    double residual;
    bool bisection;
};

/// delta_tilde = (1/k) sum sigma_i^2 (beta dt + N0) / (sigma_i^2 + N0 + beta dt),
/// delta = (1/beta) (1 + beta dt / N0)^{-1}, at the noise level `n0`
/// (already converted to the 1/n convention by the caller).
FixedPoint fixed_point_delta(double beta, double n0, const std::vector<double>& sigma2);

/// Same, on a model in the 1/n convention (its n0 is used as is).
FixedPoint fixed_point_delta(const ChannelModel& model);

/// Deterministic equivalents. `n` is required under the unit convention.
PsiSummaries psibar_iid(const ChannelModel& model, int n = 0);
PsiSummaries psibar_unequal(const ChannelModel& model, int n = 0);
PsiSummaries psibar(const ChannelModel& model, int n = 0);

/// F(x, z) = (sqrt(x (1 + sqrt z)^2 + 1) - sqrt(x (1 - sqrt z)^2 + 1))^2.
double mp_F(double x, double z);

struct GapStats {
    std::array<double, 4> median;
    std::array<double, 4> mean;
    std::array<double, 4> max;
};

/// |Psi_l - Psibar_l| over `draws` channel realizations with n receive and
/// round(beta n) transmit antennas (profile length when unequal).
GapStats psibar_psi_gap(const ChannelModel& model, int n, int draws, std::uint64_t seed);

}  // namespace sphericity
