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

#include "sphericity/asymptotic_w1.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sphericity/error.hpp"
#include "sphericity/monte_carlo.hpp"

namespace sphericity {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Non-decreasing positive integer parts summing to r.
void ordered_partitions(int left, int min_part, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
    if (left == 0) {
        out.push_back(cur);
        return;
    }
    for (int part = min_part; part <= left; ++part) {
        cur.push_back(part);
        ordered_partitions(left - part, part, cur, out);
        cur.pop_back();
    }
}

// Psi_{l+1} = sum_{r=0}^{l} C(l, r) N0^{l-r} M_r, l = 1..3.
std::array<double, 3> power_means(double n0, const std::array<double, 4>& M) {
    std::array<double, 3> out{};
    for (int l = 1; l <= 3; ++l) {
        double s = 0.0;
        for (int r = 0; r <= l; ++r) s += binom(l, r) * std::pow(n0, l - r) * M[r];
        out[l - 1] = s;
    }
    return out;
}

double effective_noise(const ChannelModel& model, int n, const char* who) {
    if (model.convention == VarianceConvention::one_over_n) return model.n0;
    if (n < 1) {
        throw ValidityError(std::string(who) +
                            ": the unit-variance convention needs the antenna count n");
    }
    return model.n0 / n;
}

PsiSummaries rescale(double psi1, const std::array<double, 3>& rest, const ChannelModel& model,
                     int n) {
    if (model.convention == VarianceConvention::one_over_n) {
        return {psi1, rest[0], rest[1], rest[2], PsiProvenance::deterministic_equivalent};
    }
    const double nd = n;
    return {psi1 / nd, rest[0] * nd, rest[1] * nd * nd, rest[2] * nd * nd * nd,
            PsiProvenance::deterministic_equivalent};
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::string_view to_string(PsiProvenance provenance) {
    return provenance == PsiProvenance::from_eigenvalues ? "from-eigenvalues"
                                                         : "deterministic-equivalent";
}

std::string_view to_string(ChannelKind kind) {
    return kind == ChannelKind::iid ? "iid" : "unequal";
}

std::string_view to_string(VarianceConvention convention) {
    return convention == VarianceConvention::unit ? "unit" : "one-over-n";
}

PsiSummaries psi_from_eigenvalues(const ChannelSpectrum& spectrum) {
    const auto& y = spectrum.eigenvalues();
    const double n = static_cast<double>(y.size());
    double logsum = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    for (double v : y) {
        if (!(v > 0.0)) throw DomainError("psi_from_eigenvalues: eigenvalues must be positive");
        logsum += std::log(v);
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
    }
    return {std::exp(-logsum / n), s1 / n, s2 / n, s3 / n, PsiProvenance::from_eigenvalues};
}

std::array<double, 4> psi_gap(const PsiSummaries& a, const PsiSummaries& b) {
    const auto x = a.values();
    const auto y = b.values();
    return {std::fabs(x[0] - y[0]), std::fabs(x[1] - y[1]), std::fabs(x[2] - y[2]),
            std::fabs(x[3] - y[3])};
}

CumulantSet w1_cumulants_asymptotic(const DetectorDims& dims, const PsiSummaries& psi, int P) {
    if (dims.square()) {
        throw UnsupportedError("w1_cumulants_asymptotic: no W1 expansion is available for c = 1");
    }
    if (dims.n() < 2) throw ValidityError("w1_cumulants_asymptotic: n must be >= 2");
    if (P < 2 || P > 3) throw ValidityError("w1_cumulants_asymptotic: order P must be 2 or 3");
    const double c = dims.c();
    const double n2 = static_cast<double>(dims.n()) * dims.n();
    const double e = std::numbers::e;
    const double l = std::log1p(-c);
    const double g = e * std::pow(1.0 - c, (1.0 - c) / c) * psi.psi1;
    const double p2 = psi.psi2;
    std::vector<double> kappa;
    kappa.push_back(g * p2);
    kappa.push_back(g * g * ((-l - 2.0 * c) * p2 * p2 + c * psi.psi3) / n2);
    if (P == 3) {
        const double lead = c * c * (9.0 * c - 10.0) / (c - 1.0) + 3.0 * l * (4.0 * c + l);
        const double bracket = lead * p2 * p2 * p2 - 3.0 * c * (3.0 * c + 2.0 * l) * p2 * psi.psi3 +
                               2.0 * c * c * psi.psi4;
        kappa.push_back(g * g * g * bracket / (n2 * n2));
    }
    return CumulantSet(std::move(kappa), CumulantSource::asymptotic, dims);
}

ChannelModel ChannelModel::iid(double beta, double n0, VarianceConvention convention) {
    ChannelModel m;
    m.kind = ChannelKind::iid;
    m.beta = beta;
    m.n0 = n0;
    m.convention = convention;
    m.validate();
    return m;
}

ChannelModel ChannelModel::unequal(double beta, double n0, std::vector<double> sigma2,
                                   VarianceConvention convention) {
    ChannelModel m;
    m.kind = ChannelKind::unequal_variances;
    m.beta = beta;
    m.n0 = n0;
    m.sigma2 = std::move(sigma2);
    m.convention = convention;
    m.validate();
    return m;
}

void ChannelModel::validate() const {
    if (!(beta >= 1.0) || !std::isfinite(beta)) {
        throw ValidityError("ChannelModel: beta = k/n must be >= 1");
    }
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw ValidityError("ChannelModel: n0 must be > 0");
    if (kind == ChannelKind::unequal_variances) {
        if (sigma2.empty()) throw ValidityError("ChannelModel: sigma2 profile is empty");
        for (double s : sigma2) {
            if (!(s >= 0.0) || !std::isfinite(s)) {
                throw ValidityError("ChannelModel: sigma2 entries must be finite and >= 0");
            }
        }
    } else if (!sigma2.empty()) {
        throw ValidityError("ChannelModel: sigma2 profile given for an IID model");
    }
}

double mp_moment(int r, double beta) {
    if (r < 0) throw DomainError("mp_moment: r must be >= 0");
    if (r == 0) return 1.0;
    double s = 0.0;
    for (int i = 1; i <= r; ++i) s += binom(r, i) * binom(r, i - 1) * std::pow(beta, i);
    return s / r;
}

double xi_coefficient(const std::vector<int>& parts) {
    if (parts.empty()) throw DomainError("xi_coefficient: empty part list");
    const int i = static_cast<int>(parts.size());
    int r = 0;
    for (int p : parts) {
        if (p < 1) throw DomainError("xi_coefficient: parts must be positive");
        r += p;
    }
    double v = std::tgamma(r + 1.0) / std::tgamma(r - i + 2.0);
    std::vector<int> f(static_cast<std::size_t>(r) + 1, 0);
    for (int p : parts) ++f[p];
    for (int j = 1; j <= r; ++j) v /= std::tgamma(f[j] + 1.0);
    return v;
}

double mp_moment_unequal(int r, double beta, const std::vector<double>& sigma2) {
    if (r < 0) throw DomainError("mp_moment_unequal: r must be >= 0");
    if (sigma2.empty()) throw DomainError("mp_moment_unequal: empty profile");
    if (r == 0) return 1.0;
    const double k = static_cast<double>(sigma2.size());
    std::vector<double> trace(static_cast<std::size_t>(r) + 1, 0.0);
    for (int q = 1; q <= r; ++q) {
        for (double s : sigma2) trace[q] += std::pow(s, q);
    }
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    ordered_partitions(r, 1, cur, parts);
    double total = 0.0;
    for (const auto& p : parts) {
        const int i = static_cast<int>(p.size());
        double term = std::pow(beta / k, i) * xi_coefficient(p);
        for (int q : p) term *= trace[q];
        total += term;
    }
    return total;
}

double mp_F(double x, double z) {
    const double sz = std::sqrt(z);
    const double d = std::sqrt(x * (1.0 + sz) * (1.0 + sz) + 1.0) -
                     std::sqrt(x * (1.0 - sz) * (1.0 - sz) + 1.0);
    return d * d;
}

FixedPoint fixed_point_delta(double beta, double n0, const std::vector<double>& sigma2) {
    if (sigma2.empty()) throw ValidityError("fixed_point_delta: empty sigma2 profile");
    if (!(n0 > 0.0)) throw ValidityError("fixed_point_delta: n0 must be > 0");
    if (!(beta > 0.0)) throw ValidityError("fixed_point_delta: beta must be > 0");
    const double k = static_cast<double>(sigma2.size());
    auto map = [&](double dt) {
        double s = 0.0;
        const double u = beta * dt + n0;
        for (double v : sigma2) s += v * u / (v + u);
        return s / k;
    };
    const double mean = std::accumulate(sigma2.begin(), sigma2.end(), 0.0) / k;
    const double tol = 1e-12 * std::max(1.0, mean);
    auto finish = [&](double dt, int it, bool bis) {
        const double delta = 1.0 / (beta * (1.0 + beta * dt / n0));
        return FixedPoint{delta, dt, it, std::fabs(map(dt) - dt), bis};
    };
    if (mean == 0.0) return finish(0.0, 0, false);

    // The map is increasing and bounded by mean(sigma2), so iteration from
    // the mean decreases monotonically to the fixed point.
    double dt = mean;
    constexpr int kMaxIter = 10000;
    for (int it = 1; it <= kMaxIter; ++it) {
        const double next = map(dt);
        if (std::fabs(next - dt) <= tol) return finish(next, it, false);
        dt = next;
    }
    // Slow contraction: bisect the residual map(dt) - dt on [0, mean].
    double lo = 0.0;
    double hi = mean;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (map(mid) - mid > 0.0) lo = mid; else hi = mid;
        if (hi - lo <= tol) break;
    }
    const double root = 0.5 * (lo + hi);
    const double residual = std::fabs(map(root) - root);
    if (residual > 1e3 * tol) {
        throw SolverError("fixed_point_delta: no convergence", residual);
    }
    return finish(root, kMaxIter, true);
}

FixedPoint fixed_point_delta(const ChannelModel& model) {
    model.validate();
    if (model.kind != ChannelKind::unequal_variances) {
        return fixed_point_delta(model.beta, model.n0, std::vector<double>{1.0});
    }
    return fixed_point_delta(model.beta, model.n0, model.sigma2);
}

PsiSummaries psibar_iid(const ChannelModel& model, int n) {
    model.validate();
    if (model.kind != ChannelKind::iid) throw ValidityError("psibar_iid: model is not IID");
    const double n0 = effective_noise(model, n, "psibar_iid");
    const double b = model.beta;
    const double F = mp_F(1.0 / n0, b);
    const double psi1 = (1.0 / n0) * std::pow(1.0 + 1.0 / n0 - F / 4.0, -b) /
                        (1.0 + b / n0 - F / 4.0) * std::exp(n0 * F / 4.0);
    const std::array<double, 4> M{1.0, mp_moment(1, b), mp_moment(2, b), mp_moment(3, b)};
    return rescale(psi1, power_means(n0, M), model, n);
}

PsiSummaries psibar_unequal(const ChannelModel& model, int n) {
    model.validate();
    if (model.kind != ChannelKind::unequal_variances) {
        throw ValidityError("psibar_unequal: model has no variance profile");
    }
    const double n0 = effective_noise(model, n, "psibar_unequal");
    const double b = model.beta;
    const auto fp = fixed_point_delta(b, n0, model.sigma2);
    const double k = static_cast<double>(model.sigma2.size());
    double logprod = 0.0;
    for (double s : model.sigma2) logprod += std::log1p(b * fp.delta * s / n0);
    // prod_i (.)^{-1/n} with 1/n = beta/k.
    const double psi1 = b * fp.delta / n0 * std::exp(b * b * fp.delta * fp.delta_tilde / n0) *
                        std::exp(-b / k * logprod);
    std::array<double, 4> M{1.0, 0.0, 0.0, 0.0};
    for (int r = 1; r <= 3; ++r) M[r] = mp_moment_unequal(r, b, model.sigma2);
    return rescale(psi1, power_means(n0, M), model, n);
}

PsiSummaries psibar(const ChannelModel& model, int n) {
    return model.kind == ChannelKind::iid ? psibar_iid(model, n) : psibar_unequal(model, n);
}

GapStats psibar_psi_gap(const ChannelModel& model, int n, int draws, std::uint64_t seed) {
    if (draws < 1) throw ValidityError("psibar_psi_gap: draws must be >= 1");
    const int k = model.kind == ChannelKind::unequal_variances
                      ? static_cast<int>(model.sigma2.size())
                      : static_cast<int>(std::llround(model.beta * n));
    const PsiSummaries target = psibar(model, n);
    std::array<std::vector<double>, 4> gaps;
    for (int d = 0; d < draws; ++d) {
        auto rng = chunk_engine(seed, static_cast<std::uint64_t>(d));
        const auto g = psi_gap(psi_from_eigenvalues(sample_channel(model, n, k, rng)), target);
        for (int l = 0; l < 4; ++l) gaps[l].push_back(g[l]);
    }
    GapStats out{};
    for (int l = 0; l < 4; ++l) {
        out.median[l] = median_of(gaps[l]);
        out.mean[l] = std::accumulate(gaps[l].begin(), gaps[l].end(), 0.0) / draws;
        out.max[l] = *std::max_element(gaps[l].begin(), gaps[l].end());
    }
    return out;
}

}  // namespace sphericity
