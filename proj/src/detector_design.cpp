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

#include "sphericity/detector_design.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "sphericity/asymptotic_w0.hpp"
#include "sphericity/error.hpp"
#include "sphericity/specfun.hpp"

namespace sphericity {

namespace {

constexpr int kCrossingScan = 2001;

// Tail probabilities from a CDF evaluator, made non-increasing along an
// ascending grid by a running maximum of the CDF.
template <class Cdf>
CurveTable tail_table(CurveKind kind, std::span<const double> grid, Cdf&& cdf) {
    CurveTable table(kind);
    double running = 0.0;
    for (double eta : grid) {
        const Probability p = cdf(eta);
        running = std::max(running, p.value);
        table.push({eta, 1.0 - running, 1.0 - p.raw, std::nullopt, std::nullopt});
    }
    return table;
}

Probability gaussian_limit_pfa(const DetectorDims& dims, double eta) {
    const auto g = gaussian_limit(dims.c());
    const double v = 1.0 - specfun::std_normal_cdf(dims.n() * (eta - g.mu_bar) / std::sqrt(g.sigma2_bar));
    return {v, v};
}

}  // namespace

std::string_view to_string(PfaMethod method) {
    switch (method) {
        case PfaMethod::exact: return "exact";
        case PfaMethod::asymptotic: return "asymptotic";
        case PfaMethod::gaussian_limit: return "gaussian-limit";
    }
    return "unknown";
}

std::string_view to_string(DesignMethod method) {
    return method == DesignMethod::full_correction ? "full-correction" : "gaussian-limit";
}

std::string_view to_string(W1Source source) {
    switch (source) {
        case W1Source::exact: return "exact";
        case W1Source::asymptotic_psi: return "asymptotic-psi";
        case W1Source::asymptotic_psibar: return "asymptotic-psibar";
    }
    return "unknown";
}

Probability pfa(const DetectorDims& dims, double eta, PfaMethod method, int L) {
    if (method == PfaMethod::gaussian_limit) return gaussian_limit_pfa(dims, eta);
    const auto cm = method == PfaMethod::exact ? CumulantMethod::exact : CumulantMethod::asymptotic;
    return complement(cdf_w0(dims, eta, cm, L));
}

void DesignSpec::validate() const {
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) {
        throw ValidityError("alpha0 must lie in (0, 1), got " + std::to_string(alpha0));
    }
    if (L < 0) throw ValidityError("Edgeworth order L must be >= 0");
}

ThresholdResult design_threshold_full(const DesignSpec& spec) {
    spec.validate();
    const auto series = w0_series(spec.dims, spec.cumulants, spec.L);
    const double mu = series.cumulants().mean();
    const double sigma = series.cumulants().sigma();
    auto tail = [&](double eta) { return 1.0 - series.repaired_cdf(eta).value; };

    ThresholdResult res{};
    double lo = mu - 10.0 * sigma;
    double hi = mu + 10.0 * sigma;
    if (!(tail(lo) > spec.alpha0 && tail(hi) <= spec.alpha0)) {
        res.widened = true;
        lo = mu - 20.0 * sigma;
        hi = mu + 20.0 * sigma;
        if (!(tail(lo) > spec.alpha0 && tail(hi) <= spec.alpha0)) {
            throw SolverError("design_threshold_full: alpha0=" + std::to_string(spec.alpha0) +
                                  " not bracketed on [kappa_1 - 20 sigma, kappa_1 + 20 sigma]; "
                                  "P_FA there is " + std::to_string(tail(lo)) + " .. " +
                                  std::to_string(tail(hi)),
                              std::fabs(tail(hi) - spec.alpha0));
        }
    }
    const double scan_lo = lo;
    const double scan_hi = hi;
    // Invariant: tail(lo) > alpha0 >= tail(hi).
    while (res.iterations < 400) {
        ++res.iterations;
        const double mid = 0.5 * (lo + hi);
        if (tail(mid) > spec.alpha0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi))) break;
        if (spec.alpha0 - tail(hi) <= 1e-8 && hi - lo <= 1e-9 * std::max(1.0, std::fabs(hi))) break;
    }
    res.eta = hi;
    res.pfa = tail(hi);

    double prev_eta = scan_lo;
    double prev = 1.0 - series.raw_cdf(prev_eta) - spec.alpha0;
    for (int i = 1; i < kCrossingScan; ++i) {
        const double eta = scan_lo + (scan_hi - scan_lo) * i / (kCrossingScan - 1);
        const double cur = 1.0 - series.raw_cdf(eta) - spec.alpha0;
        if ((prev > 0.0) != (cur > 0.0)) {
            res.raw_crossings.push_back(prev_eta + (eta - prev_eta) * prev / (prev - cur));
        }
        prev = cur;
        prev_eta = eta;
    }
    return res;
}

double design_threshold_gaussian(const DesignSpec& spec) {
    spec.validate();
    const auto g = gaussian_limit(spec.dims.c());
    return g.mu_bar +
           std::sqrt(2.0 * g.sigma2_bar) / spec.dims.n() * specfun::erf_inv(1.0 - 2.0 * spec.alpha0);
}

double design_threshold(const DesignSpec& spec) {
    return spec.method == DesignMethod::full_correction ? design_threshold_full(spec).eta
                                                        : design_threshold_gaussian(spec);
}

Probability pd_at(const DetectorDims& dims, const W1Input& channel, double eta,
                  CumulantMethod method, int L) {
    return complement(cdf_w1(dims, channel, eta, method, L));
}

CurveTable pfa_curve(const DetectorDims& dims, std::span<const double> eta_grid, PfaMethod method,
                     int L) {
    if (method == PfaMethod::gaussian_limit) {
        return tail_table(CurveKind::pfa_vs_eta, eta_grid,
                          [&](double eta) { return complement(gaussian_limit_pfa(dims, eta)); });
    }
    const auto cm = method == PfaMethod::exact ? CumulantMethod::exact : CumulantMethod::asymptotic;
    const auto series = w0_series(dims, cm, L);
    auto table = tail_table(CurveKind::pfa_vs_eta, eta_grid,
                            [&](double eta) { return series.repaired_cdf(eta); });
    for (const auto& note : series.cumulants().notes()) table.add_note(note);
    return table;
}

CurveTable pd_curve(const DetectorDims& dims, const W1Input& channel,
                    std::span<const double> eta_grid, CumulantMethod method, int L) {
    const auto series = w1_series(dims, channel, method, L);
    auto table = tail_table(CurveKind::pd_vs_eta, eta_grid,
                            [&](double eta) { return series.repaired_cdf(eta); });
    for (const auto& note : series.cumulants().notes()) table.add_note(note);
    return table;
}

std::vector<double> default_alpha_grid() { return log_grid(1e-3, 0.5, 21); }

CurveTable roc(const DesignSpec& spec, std::span<const double> alpha_grid, const W1Input& channel,
               CumulantMethod w1_method, int w1_L) {
    const auto series = w1_series(spec.dims, channel, w1_method, w1_L);
    CurveTable table(CurveKind::roc);
    double prev_alpha = 0.0;
    for (double alpha : alpha_grid) {
        if (!(alpha > prev_alpha && alpha < 1.0)) {
            throw ValidityError("roc: alpha grid must be increasing inside (0, 1)");
        }
        prev_alpha = alpha;
        DesignSpec s = spec;
        s.alpha0 = alpha;
        const double eta = design_threshold(s);
        const Probability p = complement(series.repaired_cdf(eta));
        table.push({alpha, p.value, p.raw, std::nullopt, eta});
    }
    return table;
}

}  // namespace sphericity
