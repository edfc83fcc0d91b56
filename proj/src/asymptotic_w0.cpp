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

#include "sphericity/asymptotic_w0.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sphericity/edgeworth.hpp"
#include "sphericity/error.hpp"
#include "sphericity/specfun.hpp"

namespace sphericity {

namespace {

double rising(double a, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= a + i;
    return r;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double bernoulli_value(int k) {
    const auto b = specfun::bernoulli(k);
    return b.exact ? static_cast<double>(b.numerator) / static_cast<double>(b.denominator)
                   : b.value;
}

void check_interior(double c, const char* who) {
    if (!(c > 0.0 && c < 1.0)) {
        throw DomainError(std::string(who) + ": c must lie in (0, 1), got " +
                          std::to_string(c) + "; c = 1 has its own branch");
    }
}

void check_orders(int P, int J, const char* who) {
    if (P < 1 || P > 12) throw ValidityError(std::string(who) + ": order must be in [1, 12]");
    if (J < 1 || J > 8) throw ValidityError(std::string(who) + ": terms must be in [1, 8]");
}

}  // namespace

double coeff_A(int p, int q, double c) {
    check_interior(c, "coeff_A");
    if (p < 1 || q < 0) throw DomainError("coeff_A: need p >= 1 and q >= 0");
    const double pd = p;
    const double lc = std::log1p(-c);
    if (q == 0) return pd - pd * (1.0 - 1.0 / c) * lc;
    if (q == 1) {
        return -pd * pd / 2.0 * lc +
               c * pd * (12.0 - 11.0 * c + 6.0 * (1.0 - pd) * (c - 1.0)) / (12.0 * (c - 1.0));
    }
    const double qd = q;
    const double cpq = std::pow(c * pd, qd);
    const double den = 12.0 * c * qd * (qd * qd - 1.0);
    double t = cpq * (c + 12.0 * pd - 12.0 * c * pd - c * qd * qd) / (den * std::pow(1.0 - c, qd));
    t += cpq * (-12.0 * pd + c * (qd * qd - 1.0)) / den;
    t -= std::pow(c, qd) / qd * specfun::gen_harmonic(p, -q);
    for (int j = 1; j < q; ++j) {
        t += bernoulli_value(2 * j + 2) * std::pow(c, 2.0 * j) * rising(2.0 * j, q - j) *
             std::pow(pd * c, q - j) / (4.0 * j * (j + 1.0) * factorial(q - j)) *
             (1.0 - std::pow(1.0 - c, -static_cast<double>(j + q)));
    }
    return t;
}

double coeff_A_unit(int p, int q, int n) {
    if (p < 1 || q < 0 || n < 1) throw DomainError("coeff_A_unit: need p, n >= 1 and q >= 0");
    const double pd = p;
    if (q == 0) return pd;
    if (q == 1) return -pd / 2.0;
    if (q == 2) {
        return 0.5 * pd * pd * (specfun::euler_gamma() + std::log(static_cast<double>(n))) -
               5.0 * pd / 12.0;
    }
    const double qd = q;
    double t = std::pow(pd, qd) * specfun::zeta_int(q - 1) / qd;
    if (q % 2 == 1) return t;
    const int h = q / 2;
    t -= 2.0 * specfun::gen_harmonic(p, -h) / qd;
    t -= 2.0 * std::pow(pd, h + 1.0) * qd / (qd * qd - 4.0);
    t += (pd + 1.0 / 12.0) * 2.0 * std::pow(pd, h) / qd;
    for (int j = 1; j < h; ++j) {
        t += bernoulli_value(2 * j + 2) * std::pow(pd, h - j) * rising(2.0 * j, h - j) /
             (4.0 * j * (j + 1.0) * factorial(h - j));
    }
    return t;
}

int ExpansionCoefficients::cumulant_offset(int p) const {
    if (branch_ == ExpansionBranch::interior) return p - 1;
    return p == 1 ? 0 : p;
}

ExpansionCoefficients ExpansionCoefficients::interior(double c, int P, int J) {
    check_interior(c, "ExpansionCoefficients");
    check_orders(P, J, "ExpansionCoefficients");
    ExpansionCoefficients out(ExpansionBranch::interior, P, J);
    const int qmax = out.cumulant_offset(P) + J - 1;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(P) + 1);
    for (int p = 1; p <= P; ++p) {
        for (int q = 0; q <= qmax; ++q) a[p].push_back(coeff_A(p, q, c));
    }
    out.build(a);
    return out;
}

ExpansionCoefficients ExpansionCoefficients::unit_ratio(int n, int P, int J) {
    check_orders(P, J, "ExpansionCoefficients");
    ExpansionCoefficients out(ExpansionBranch::unit_ratio, P, J);
    const int qmax = out.cumulant_offset(P) + J - 1;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(P) + 1);
    for (int p = 1; p <= P; ++p) {
        for (int q = 0; q <= qmax; ++q) a[p].push_back(coeff_A_unit(p, q, n));
    }
    out.build(a);
    return out;
}

void ExpansionCoefficients::build(const std::vector<std::vector<double>>& a_table) {
    a_ = a_table;
    const int qmax = static_cast<int>(a_[1].size()) - 1;
    // beta_{p,j} = exp(A_{p,0}) sum over i_1 + 2 i_2 + ... = j of prod A_{p,r}^{i_r} / i_r!
    std::vector<std::vector<PartitionSolution>> parts(static_cast<std::size_t>(qmax) + 1);
    for (int j = 1; j <= qmax; ++j) parts[j] = partition_solutions(j);
    beta_.assign(static_cast<std::size_t>(P_) + 1, {});
    for (int p = 1; p <= P_; ++p) {
        const double lead = std::exp(a_[p][0]);
        beta_[p].push_back(lead);
        for (int j = 1; j <= qmax; ++j) {
            double s = 0.0;
            for (const auto& sol : parts[j]) {
                double t = 1.0;
                for (int r = 1; r <= j; ++r) {
                    const int ir = sol.j[r - 1];
                    if (ir > 0) t *= std::pow(a_[p][r], ir) / factorial(ir);
                }
                s += t;
            }
            beta_[p].push_back(lead * s);
        }
    }
    // alpha_{p,k} = beta_{p,e(p)+k}
    //   - sum_r C(p-1, r-1) sum_{j=0}^{e(p)+k-e(r)} alpha_{r,j} beta_{p-r, e(p)+k-e(r)-j}
    alpha_.assign(static_cast<std::size_t>(P_) + 1, {});
    for (int p = 1; p <= P_; ++p) {
        const int ep = cumulant_offset(p);
        for (int k = 0; ep + k <= qmax; ++k) {
            double v = beta_[p][ep + k];
            for (int r = 1; r < p; ++r) {
                const int top = ep + k - cumulant_offset(r);
                const double w = binom(p - 1, r - 1);
                for (int j = 0; j <= top; ++j) v -= w * alpha_[r][j] * beta_[p - r][top - j];
            }
            alpha_[p].push_back(v);
        }
    }
}

double ExpansionCoefficients::A(int p, int q) const {
    if (p < 1 || p > P_ || q < 0 || q >= static_cast<int>(a_[p].size())) {
        throw ValidityError("ExpansionCoefficients::A: index outside the table");
    }
    return a_[p][q];
}

double ExpansionCoefficients::beta(int p, int j) const {
    if (p < 1 || p > P_ || j < 0 || j >= static_cast<int>(beta_[p].size())) {
        throw ValidityError("ExpansionCoefficients::beta: index outside the table");
    }
    return beta_[p][j];
}

double ExpansionCoefficients::alpha(int p, int j) const {
    if (p < 1 || p > P_ || j < 0 || j >= static_cast<int>(alpha_[p].size())) {
        throw ValidityError("ExpansionCoefficients::alpha: index outside the table");
    }
    return alpha_[p][j];
}

double coeff_beta(int p, int j, double c) {
    if (j < 0) throw DomainError("coeff_beta: j must be >= 0");
    // The table for order p holds beta_{p, j} up to index p - 1 + J - 1.
    const int J = std::max(1, j - p + 2);
    return ExpansionCoefficients::interior(c, p, J).beta(p, j);
}

double coeff_alpha(int p, int j, double c) {
    if (j < 0) throw DomainError("coeff_alpha: j must be >= 0");
    return ExpansionCoefficients::interior(c, p, j + 1).alpha(p, j);
}

double asymptotic_moment_w0(const DetectorDims& dims, int p, int terms) {
    const double c = dims.c();
    const int n = dims.n();
    const bool unit = dims.square();
    if (!unit) check_interior(c, "asymptotic_moment_w0");
    if (terms < 1) throw ValidityError("asymptotic_moment_w0: terms must be >= 1");
    // Only beta_{p, 0 .. terms-1} are needed.
    const int J = std::max(1, terms - (unit ? (p == 1 ? 0 : p) : p - 1));
    const auto coeffs = unit ? ExpansionCoefficients::unit_ratio(n, p, J)
                             : ExpansionCoefficients::interior(c, p, J);
    const double inv = std::pow(static_cast<double>(n), -coeffs.step());
    double s = 0.0;
    double scale = 1.0;
    for (int j = 0; j < terms; ++j) {
        s += coeffs.beta(p, j) * scale;
        scale *= inv;
    }
    return s;
}

namespace {

CumulantSet series_cumulants(const DetectorDims& dims, const ExpansionCoefficients& coeffs,
                             int P, int terms, CumulantSource source) {
    const double n = dims.n();
    std::vector<double> kappa(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p) {
        double v = 0.0;
        for (int j = 0; j < terms; ++j) {
            v += coeffs.alpha(p, j) *
                 std::pow(n, -static_cast<double>(coeffs.step() * (coeffs.cumulant_offset(p) + j)));
        }
        kappa[p - 1] = v;
    }
    CumulantSet out(std::move(kappa), source, dims);
    out.add_note("cumulant series summed through " + std::to_string(terms) +
                 " terms; the expansion is asymptotic and no truncation rule is known");
    return out;
}

}  // namespace

CumulantSet asymptotic_cumulants_w0(const DetectorDims& dims, int P, int terms) {
    if (dims.square()) {
        CumulantSet out = c1_cumulants_w0(dims, P, terms);
        out.add_note("c = 1: routed to the unit-ratio branch");
        return out;
    }
    if (dims.n() < 2) throw ValidityError("asymptotic_cumulants_w0: n must be >= 2");
    if (P < 2) throw ValidityError("asymptotic_cumulants_w0: order P must be >= 2");
    if (terms < 1) throw ValidityError("asymptotic_cumulants_w0: terms must be >= 1");
    const double c = dims.c();
    std::optional<CumulantSet> result;
    if (terms == 1 && P <= 4) {
        const double e = std::numbers::e;
        const double n2 = static_cast<double>(dims.n()) * dims.n();
        const double a1 = 1.0 - c;
        const double a2 = std::log1p(-c);
        const double a3 = 1.0 - 1.0 / c;
        const double k1 = std::pow(a1, -a3) * e;
        const double k2 = -e * e * std::pow(a1, -2.0 * a3) * (c + a2) / n2;
        const double k3 = -std::pow(e, 3) * std::pow(a1, -3.0 * a3 - 1.0) *
                          (c * c * (2.0 * c - 3.0) - 6.0 * c * a1 * a2 - 3.0 * a1 * a2 * a2) /
                          (n2 * n2);
        const double k4 =
            -std::pow(e, 4) * std::pow(a1, -4.0 * a3 - 2.0) *
            (c * c * c * (16.0 + c * (6.0 * c - 23.0)) - 12.0 * a1 * c * c * (3.0 * c - 4.0) * a2 +
             48.0 * c * a1 * a1 * a2 * a2 + 16.0 * a1 * a1 * a2 * a2 * a2) /
            (n2 * n2 * n2);
        std::vector<double> kappa{k1, k2, k3, k4};
        kappa.resize(static_cast<std::size_t>(P));
        result.emplace(std::move(kappa), CumulantSource::asymptotic, dims);
    } else {
        const auto coeffs = ExpansionCoefficients::interior(c, P, terms);
        result.emplace(series_cumulants(dims, coeffs, P, terms, CumulantSource::asymptotic));
    }
    if (dims.m() == dims.n() + 1) {
        result->add_note("m = n + 1: c is close to 1 and the c < 1 expansion loses accuracy");
    }
    return *result;
}

CumulantSet c1_cumulants_w0(const DetectorDims& dims, int P, int terms) {
    if (!dims.square()) {
        throw DomainError("c1_cumulants_w0: requires n == m, got n=" + std::to_string(dims.n()) +
                          " m=" + std::to_string(dims.m()));
    }
    if (dims.n() < 2) throw ValidityError("c1_cumulants_w0: n must be >= 2");
    if (P < 2) throw ValidityError("c1_cumulants_w0: order P must be >= 2");
    if (terms < 1) throw ValidityError("c1_cumulants_w0: terms must be >= 1");
    const double n = dims.n();
    const double e = std::numbers::e;
    std::optional<CumulantSet> result;
    if (terms == 1) {
        std::vector<double> kappa(static_cast<std::size_t>(P));
        kappa[0] = e;
        kappa[1] = e * e * (specfun::euler_gamma() + std::log(n)) / (n * n);
        for (int p = 3; p <= P; ++p) {
            kappa[p - 1] = std::pow(e / n, p) * factorial(p - 1) * specfun::zeta_int(p - 1);
        }
        result.emplace(std::move(kappa), CumulantSource::c1_branch, dims);
    } else {
        const auto coeffs = ExpansionCoefficients::unit_ratio(dims.n(), P, terms);
        result.emplace(series_cumulants(dims, coeffs, P, terms, CumulantSource::c1_branch));
    }
    result->add_note("c = 1 series coefficients contain ln n; uniformity in n is not established");
    return *result;
}

GaussianLimit gaussian_limit(double c_bar) {
    check_interior(c_bar, "gaussian_limit");
    const double e = std::numbers::e;
    const double b = std::pow(1.0 - c_bar, (1.0 - c_bar) / c_bar);
    return {e * b, e * e * b * b * (-std::log1p(-c_bar) - c_bar), c_bar};
}

}  // namespace sphericity
