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

#include "sphericity/edgeworth.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "sphericity/error.hpp"
#include "sphericity/specfun.hpp"

namespace sphericity {

namespace {

void partitions_rec(int s, int part, int left, std::vector<int>& j, int r,
                    std::vector<PartitionSolution>& out) {
    if (part > s) {
        if (left == 0) out.push_back({j, r});
        return;
    }
    for (int count = left / part; count >= 0; --count) {
        j[part - 1] = count;
        partitions_rec(s, part + 1, left - count * part, j, r + count, out);
    }
    j[part - 1] = 0;
}

// Monomial coefficients of He_h, lowest degree first.
std::vector<double> hermite_monomials(int h) {
    std::vector<double> prev{1.0};
    if (h == 0) return prev;
    std::vector<double> cur{0.0, 1.0};
    for (int l = 1; l < h; ++l) {
        std::vector<double> next(static_cast<std::size_t>(l) + 2, 0.0);
        for (int i = 0; i <= l; ++i) next[i + 1] += cur[i];
        for (int i = 0; i < static_cast<int>(prev.size()); ++i) next[i] -= l * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

constexpr double kCriticalWindow = 40.0;

}  // namespace

std::vector<PartitionSolution> partition_solutions(int s) {
    if (s < 1) throw DomainError("partition_solutions: s must be >= 1");
    std::vector<PartitionSolution> out;
    std::vector<int> j(static_cast<std::size_t>(s), 0);
    partitions_rec(s, 1, s, j, 0, out);
    return out;
}

EdgeworthSeries::EdgeworthSeries(CumulantSet cumulants, int L)
    : cumulants_(std::move(cumulants)), L_(L) {
    if (L_ < 0) throw ValidityError("EdgeworthSeries: order L must be >= 0");
    if (!(cumulants_.sigma() > 0.0)) {
        throw DomainError("EdgeworthSeries: standard deviation must be positive");
    }
    if (L_ >= 1 && cumulants_.order() < L_ + 2) {
        throw ValidityError("EdgeworthSeries: order L=" + std::to_string(L_) + " needs " +
                            std::to_string(L_ + 2) + " cumulants, got " +
                            std::to_string(cumulants_.order()));
    }
    const double sigma = cumulants_.sigma();
    // lambda_l = kappa_{l+2} / ((l+2)! sigma^{l+2})
    std::vector<double> lambda(static_cast<std::size_t>(L_) + 1, 0.0);
    double fact = 2.0;
    for (int l = 1; l <= L_; ++l) {
        fact *= l + 2;
        lambda[l] = cumulants_.k(l + 2) / (fact * std::pow(sigma, l + 2));
    }
    d_.assign(static_cast<std::size_t>(3 * L_), 0.0);
    for (int s = 1; s <= L_; ++s) {
        for (const auto& sol : partition_solutions(s)) {
            double term = 1.0;
            for (int l = 1; l <= s; ++l) {
                const int jl = sol.j[l - 1];
                if (jl == 0) continue;
                term *= std::pow(lambda[l], jl) / std::tgamma(jl + 1.0);
            }
            d_[static_cast<std::size_t>(s + 2 * sol.r - 1)] += term;
        }
    }

    // Stationary points: zeros of 1 + sum_h d_h He_{h+1}(t).
    if (L_ >= 1) {
        std::vector<double> poly(d_.size() + 1, 0.0);
        poly[0] = 1.0;
        for (std::size_t h = 0; h < d_.size(); ++h) {
            if (d_[h] == 0.0) continue;
            const auto mono = hermite_monomials(static_cast<int>(h) + 1);
            for (std::size_t i = 0; i < mono.size(); ++i) poly[i] += d_[h] * mono[i];
        }
        int deg = static_cast<int>(poly.size()) - 1;
        while (deg > 0 && poly[deg] == 0.0) --deg;
        std::vector<double> roots;
        if (deg == 1) {
            roots.push_back(-poly[0] / poly[1]);
        } else if (deg > 1) {
            Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
            for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
            for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -poly[i] / poly[deg];
            Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
            const auto ev = solver.eigenvalues();
            // Spurious candidates are harmless: the raw CDF at any point
            // t <= x never exceeds its supremum over (-inf, x].
            for (int i = 0; i < deg; ++i) roots.push_back(ev[i].real());
        }
        std::sort(roots.begin(), roots.end());
        for (double t : roots) {
            if (std::fabs(t) > kCriticalWindow) continue;
            critical_x_.push_back(cumulants_.mean() + sigma * t);
            critical_f_.push_back(raw_standard(t));
        }
    }
}

double EdgeworthSeries::standardize(double x) const noexcept {
    return (x - cumulants_.mean()) / cumulants_.sigma();
}

double EdgeworthSeries::raw_standard(double t) const {
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    double corr = 0.0;
    for (std::size_t h = 0; h < d_.size(); ++h) {
        if (d_[h] != 0.0) corr += d_[h] * specfun::hermite_che(static_cast<int>(h), t);
    }
    return specfun::std_normal_cdf(t) - specfun::std_normal_pdf(t) * corr;
}

double EdgeworthSeries::raw_cdf(double x) const {
    if (std::isnan(x)) throw DomainError("EdgeworthSeries: NaN argument");
    return raw_standard(standardize(x));
}

Probability EdgeworthSeries::cdf(double x) const {
    const double raw = raw_cdf(x);
    return {std::clamp(raw, 0.0, 1.0), raw};
}

Probability EdgeworthSeries::repaired_cdf(double x) const {
    const double raw = raw_cdf(x);
    double best = std::max(raw, 0.0);
    for (std::size_t i = 0; i < critical_x_.size() && critical_x_[i] <= x; ++i) {
        best = std::max(best, critical_f_[i]);
    }
    return {std::min(best, 1.0), raw};
}

double correction_G(double x, double sigma, double k3, double k4) {
    if (!(sigma > 0.0)) throw DomainError("correction_G: sigma must be positive");
    const double x2 = x * x;
    const double s3 = sigma * sigma * sigma;
    const double bracket = k3 * (x2 - 1.0) + k4 / (4.0 * sigma) * x * (x2 - 3.0) +
                           k3 * k3 / (12.0 * s3) * x * (x2 * x2 - 10.0 * x2 + 15.0);
    return specfun::std_normal_cdf(x) -
           std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * x2) / (12.0 * s3) * bracket;
}

}  // namespace sphericity
