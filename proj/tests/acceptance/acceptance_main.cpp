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

// Acceptance gate. Prints one PASS/FAIL line per criterion with the measured
// quantities; exits non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sphericity/asymptotic_w0.hpp"
#include "sphericity/asymptotic_w1.hpp"
#include "sphericity/cli.hpp"
#include "sphericity/detector_design.hpp"
#include "sphericity/distribution.hpp"
#include "sphericity/glrt_moments.hpp"
#include "sphericity/monte_carlo.hpp"
#include "sphericity/specfun.hpp"

using namespace sphericity;

namespace {

// Tolerances.
constexpr double kC1MaxSeconds = 1.0;
constexpr std::uint64_t kC2Trials = 10'000'000;
constexpr double kC2MaxSe = 3.0;
constexpr std::uint64_t kC3Trials = 1'000'000;
constexpr double kC3PfaTol = 0.01;
constexpr double kC3PdTol = 0.015;
constexpr double kC3GaussRatio = 2.0;
constexpr double kC3N0 = 5.0;
constexpr double kC4Tol = 2e-3;
constexpr std::uint64_t kC5Trials = 1'000'000;
constexpr double kC5Ks64 = 0.01;
constexpr double kC6K2Rel = 0.05;
constexpr double kC6K3Rel = 0.10;
constexpr double kC7CurveTol = 0.02;
constexpr double kC7PsiTol = 1e-5;
constexpr int kC7Draws = 100;
constexpr int kC7M = 40;
constexpr std::uint64_t kC8Trials = 1'000'000;
constexpr std::uint64_t kC9Trials = 100'000;
constexpr double kC9Sigmas = 2.0;

const int kWorkers = std::max(1u, std::thread::hardware_concurrency());

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> sorted_samples(SimPlan plan) {
    plan.workers = kWorkers;
    auto s = sample_statistic(plan).samples;
    std::sort(s.begin(), s.end());
    return s;
}

double tail_fraction(const std::vector<double>& sorted, double eta) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), eta);
    return static_cast<double>(above) / static_cast<double>(sorted.size());
}

// Max |analytic - MC| over the grid where the MC tail is in [0.01, 0.99].
double max_tail_gap(const std::vector<double>& sorted, const std::vector<double>& grid,
                    const std::function<double(double)>& analytic) {
    double worst = 0.0;
    for (double eta : grid) {
        const double mc = tail_fraction(sorted, eta);
        if (mc < 0.01 || mc > 0.99) continue;
        worst = std::max(worst, std::fabs(analytic(eta) - mc));
    }
    return worst;
}

std::vector<double> span_grid(const CumulantSet& k, double lo, double hi, int count) {
    return linear_grid(k.mean() + lo * k.sigma(), k.mean() + hi * k.sigma(), count);
}

// -------------------------------------------------------------------------

Outcome c1_degenerate() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int m : {1, 2, 5, 20}) {
        const DetectorDims d(1, m);
        SimPlan plan(d);
        plan.trials = 100000;
        for (double w : sample_statistic(plan).samples) ok = ok && w == 1.0;
        for (int p = 1; p < m; ++p) {
            ok = ok && exact_moment_w0(d, p) == 1.0;
            ok = ok && exact_moment_w1(d, ChannelSpectrum({2.0}, 1.0), p) == 1.0;
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {ok && secs < kC1MaxSeconds,
            std::string(ok ? "all samples and moments exactly 1" : "non-unit value seen") +
                ", runtime " + fmt("%.3f", secs) + " s"};
}

Outcome c2_moments() {
    struct Case {
        int n, m;
        bool h1;
    };
    const Case cases[] = {{2, 3, false}, {2, 4, false}, {4, 15, false}, {2, 3, true}, {2, 4, true}};
    bool ok = true;
    double worst = 0.0;
    std::string where;
    std::ostringstream extra;
    std::uint64_t seed = 1000;
    for (const auto& c : cases) {
        const DetectorDims d(c.n, c.m);
        SimPlan plan(d);
        plan.trials = kC2Trials;
        plan.seed = seed++;
        plan.workers = kWorkers;
        const ChannelSpectrum y({1.0, 2.0}, 1.0);
        if (c.h1) {
            plan.hypothesis = Hypothesis::h1;
            plan.spectrum = y;
        }
        const auto s = sample_statistic(plan).samples;
        const auto mom = sample_moments(s, 3);
        for (int p = 1; p <= 3; ++p) {
            const double exact = c.h1 ? exact_moment_w1(d, y, p) : exact_moment_w0(d, p);
            const double z = std::fabs(mom[p - 1].value - exact) / mom[p - 1].std_err;
            const bool finite_var = 2 * p < c.n * (c.m - c.n + 1);
            if (z > worst) {
                worst = z;
                where = std::string(c.h1 ? "H1" : "H0") + "(" + std::to_string(c.n) + "," +
                        std::to_string(c.m) + ") p=" + std::to_string(p);
            }
            if (z > kC2MaxSe) {
                ok = false;
                extra << " [" << (c.h1 ? "H1" : "H0") << "(" << c.n << "," << c.m << ") p=" << p
                      << " z=" << fmt("%.2f", z) << (finite_var ? "" : ", infinite variance") << "]";
            }
        }
    }
    return {ok, "worst |MC - exact| = " + fmt("%.2f", worst) + " SE at " + where + extra.str()};
}

Outcome c3_edgeworth() {
    bool ok = true;
    std::ostringstream out;
    double gauss_ratio = 0.0;
    for (auto [n, m] : {std::pair{4, 15}, {10, 20}}) {
        const DetectorDims d(n, m);
        SimPlan h0(d);
        h0.trials = kC3Trials;
        h0.seed = 31 + n;
        const auto s0 = sorted_samples(h0);
        const auto k0 = w0_cumulants(d, CumulantMethod::exact, 4);
        const auto grid0 = span_grid(k0, -5.0, 8.0, 400);
        const double e2 = max_tail_gap(s0, grid0, [&](double eta) { return pfa(d, eta, PfaMethod::exact, 2).value; });
        const double e0 = max_tail_gap(s0, grid0, [&](double eta) { return pfa(d, eta, PfaMethod::exact, 0).value; });

        const auto model = ChannelModel::iid(1.0, kC3N0, VarianceConvention::unit);
        const auto y = sample_channel(model, n, n, 0xC3C3u + n);
        SimPlan h1(d);
        h1.hypothesis = Hypothesis::h1;
        h1.spectrum = y;
        h1.trials = kC3Trials;
        h1.seed = 41 + n;
        const auto s1 = sorted_samples(h1);
        const auto k1 = w1_cumulants(d, y, CumulantMethod::exact, 4);
        const auto grid1 = span_grid(k1, -6.0, 8.0, 400);
        const double pd = max_tail_gap(s1, grid1, [&](double eta) {
            return pd_at(d, W1Input(y), eta, CumulantMethod::exact, 2).value;
        });
        ok = ok && e2 <= kC3PfaTol && pd <= kC3PdTol;
        if (n == 4) gauss_ratio = e0 / e2;
        out << "(" << n << "," << m << ") P_FA L=2 " << fmt("%.4f", e2) << ", L=0 " << fmt("%.4f", e0)
            << ", P_D " << fmt("%.4f", pd) << "; ";
    }
    ok = ok && gauss_ratio >= kC3GaussRatio;
    out << "L=0/L=2 at (4,15) = " << fmt("%.1f", gauss_ratio);
    return {ok, out.str()};
}

Outcome c4_asymptotic_cumulants() {
    bool ok = true;
    std::ostringstream out;
    for (auto [n, m] : {std::pair{4, 8}, {10, 20}}) {
        const DetectorDims d(n, m);
        const auto ex = EdgeworthSeries(exact_cumulants_w0(d, 4), 2);
        const auto grid = span_grid(ex.cumulants(), -8.0, 10.0, 2000);
        double gap[3] = {0.0, 0.0, 0.0};
        for (int terms = 1; terms <= 3; ++terms) {
            const EdgeworthSeries as(asymptotic_cumulants_w0(d, 4, terms), 2);
            for (double eta : grid) {
                gap[terms - 1] = std::max(gap[terms - 1], std::fabs(as.cdf(eta).value - ex.cdf(eta).value));
            }
        }
        ok = ok && gap[0] <= kC4Tol;
        out << "(" << n << "," << m << ") leading " << fmt("%.2e", gap[0]) << " [2-term "
            << fmt("%.2e", gap[1]) << ", 3-term " << fmt("%.2e", gap[2]) << "]; ";
    }
    std::string s = out.str();
    s.resize(s.size() - 2);
    return {ok, s};
}

Outcome c5_gaussian_limit() {
    const auto g = gaussian_limit(0.5);
    const double sd = std::sqrt(g.sigma2_bar);
    std::vector<double> ks;
    std::ostringstream out;
    for (int n : {8, 16, 32, 64}) {
        SimPlan plan(DetectorDims(n, 2 * n));
        plan.trials = kC5Trials;
        plan.seed = 500 + n;
        auto s = sorted_samples(plan);
        for (auto& w : s) w = n * (w - g.mu_bar) / sd;
        ks.push_back(ks_normal(s, 0.0, 1.0));
        out << "n=" << n << " " << fmt("%.4f", ks.back()) << " ";
    }
    bool mono = true;
    for (std::size_t i = 1; i < ks.size(); ++i) mono = mono && ks[i] < ks[i - 1];
    return {mono && ks.back() < kC5Ks64, "KS " + out.str() + (mono ? "(decreasing)" : "(not monotone)")};
}

Outcome c6_c1_branch() {
    bool ok = true;
    std::ostringstream out;
    const double e = std::numbers::e;
    for (int n : {16, 32}) {
        const auto ex = exact_cumulants_w0(DetectorDims(n, n), 3);
        const double k2 = e * e * (specfun::euler_gamma() + std::log(n)) / (n * n);
        const double k3 = e * e * e * 2.0 * specfun::zeta_int(2) / (1.0 * n * n * n);
        const double r2 = std::fabs(k2 / ex.k(2) - 1.0);
        const double r3 = std::fabs(k3 / ex.k(3) - 1.0);
        ok = ok && r2 <= kC6K2Rel && r3 <= kC6K3Rel;
        out << "n=" << n << " k2 rel " << fmt("%.4f", r2) << ", k3 rel " << fmt("%.4f", r3) << "; ";
    }
    std::string s = out.str();
    s.resize(s.size() - 2);
    return {ok, s};
}

Outcome c7_deterministic_equivalents() {
    std::ostringstream out;
    // Reference table, 1/n convention.
    const auto iid = ChannelModel::iid(1.0, 6.0, VarianceConvention::one_over_n);
    const auto bar = psibar(iid);
    const double ref[] = {0.1442195, 7.0, 50.0, 365.0};
    bool table = std::fabs(bar.psi1 - ref[0]) < 5e-7;
    for (int l = 1; l < 4; ++l) table = table && std::fabs(bar.values()[l] - ref[l]) < 1e-9;
    // Unit profile.
    const auto un = ChannelModel::unequal(1.0, 6.0, std::vector<double>(8, 1.0), VarianceConvention::one_over_n);
    const auto fp = fixed_point_delta(un);
    const bool prof = std::fabs(psibar(un).psi1 - bar.psi1) <= kC7PsiTol &&
                      std::fabs(fp.delta_tilde - (-3.0 + std::sqrt(15.0))) < 1e-10;
    bool catalan = true;
    const double cat[] = {1.0, 2.0, 5.0, 14.0};
    for (int r = 1; r <= 4; ++r) catalan = catalan && mp_moment(r, 1.0) == cat[r - 1];

    // Detection curves: Psi-bar against per-realization Psi, n = k = 8.
    const int n = 8;
    const DetectorDims d(n, kC7M);
    const auto kbar = w1_cumulants_asymptotic(d, bar, 3);
    const auto grid = span_grid(kbar, -8.0, 8.0, 400);
    const auto curve_bar = pd_curve(d, W1Input(bar), grid, CumulantMethod::asymptotic, 1);
    std::vector<double> gaps;
    std::mt19937_64 rng = chunk_engine(0xC7, 0);
    for (int i = 0; i < kC7Draws; ++i) {
        const auto y = sample_channel(iid, n, n, rng);
        const auto curve = pd_curve(d, W1Input(psi_from_eigenvalues(y)), grid, CumulantMethod::asymptotic, 1);
        double g = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            g = std::max(g, std::fabs(curve.rows()[j].value - curve_bar.rows()[j].value));
        }
        gaps.push_back(g);
    }
    std::sort(gaps.begin(), gaps.end());
    const double median = 0.5 * (gaps[kC7Draws / 2 - 1] + gaps[kC7Draws / 2]);
    const bool curves = median <= kC7CurveTol;
    out << "table " << (table ? "ok" : "off") << ", unit profile " << (prof ? "ok" : "off")
        << ", Catalan " << (catalan ? "ok" : "off") << ", median curve gap over " << kC7Draws
        << " draws (m=" << kC7M << ") " << fmt("%.4f", median) << " [p10 "
        << fmt("%.4f", gaps[kC7Draws / 10]) << ", p90 " << fmt("%.4f", gaps[9 * kC7Draws / 10]) << "]";
    return {table && prof && catalan && curves, out.str()};
}

Outcome c8_threshold_design() {
    bool ok = true;
    std::ostringstream out;
    double prev_full = INFINITY, prev_gauss = INFINITY;
    for (int n : {8, 12}) {
        const DetectorDims d(n, 5 * n);
        DesignSpec spec(d, 0.01);
        const double eta_full = design_threshold_full(spec).eta;
        const double eta_gauss = design_threshold_gaussian(spec);
        SimPlan plan(d);
        plan.trials = kC8Trials;
        plan.seed = 800 + n;
        const auto s = sorted_samples(plan);
        const double pf = tail_fraction(s, eta_full);
        const double pg = tail_fraction(s, eta_gauss);
        const double gf = std::fabs(pf - 0.01), gg = std::fabs(pg - 0.01);
        ok = ok && pf >= 0.005 && pf <= 0.02 && pg > 0.01 && pg < 0.03 && gf < prev_full && gg < prev_gauss;
        prev_full = gf;
        prev_gauss = gg;
        out << "n=" << n << " full " << fmt("%.5f", pf) << ", gaussian " << fmt("%.5f", pg) << "; ";
    }
    std::string s = out.str();
    s.resize(s.size() - 2);
    return {ok, s};
}

Outcome c9_roc_monotonicity() {
    const double alphas[] = {0.001, 0.01, 0.05};
    struct Point {
        double pd, se;
    };
    auto pd_mc = [&](int n, int m, int k, double alpha, std::uint64_t seed) {
        const DetectorDims d(n, m);
        const double eta = design_threshold(DesignSpec(d, alpha));
        SimPlan plan(d);
        plan.hypothesis = Hypothesis::h1;
        plan.channel_model = ChannelModel::iid(static_cast<double>(k) / n, 6.0, VarianceConvention::unit);
        plan.k = k;
        plan.n0 = 6.0;
        plan.trials = kC9Trials;
        plan.seed = seed;
        const auto s = sorted_samples(plan);
        const double p = tail_fraction(s, eta);
        return Point{p, std::sqrt(std::max(p * (1.0 - p), 1.0 / kC9Trials) / kC9Trials)};
    };
    bool ok = true;
    std::ostringstream out;
    auto sweep = [&](const char* label, const std::vector<std::array<int, 3>>& cfgs, int sign) {
        out << label << ":";
        for (double a : alphas) {
            std::vector<Point> pts;
            for (const auto& c : cfgs) pts.push_back(pd_mc(c[0], c[1], c[2], a, 900 + c[0] * 100 + c[2]));
            out << " a=" << a << " (";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                out << (i ? "," : "") << fmt("%.4f", pts[i].pd);
                if (i > 0) {
                    const double diff = sign * (pts[i].pd - pts[i - 1].pd);
                    const double se = std::hypot(pts[i].se, pts[i - 1].se);
                    ok = ok && diff > kC9Sigmas * se;
                }
            }
            out << ")";
        }
        out << "; ";
    };
    sweep("n=4,6,8 (k=8,m=32) increasing", {{4, 32, 8}, {6, 32, 8}, {8, 32, 8}}, +1);
    sweep("k=8,16,32 (n=8,m=40) decreasing", {{8, 40, 8}, {8, 40, 16}, {8, 40, 32}}, -1);
    std::string s = out.str();
    s.resize(s.size() - 2);
    return {ok, s};
}

Outcome c10_determinism() {
    const std::vector<std::vector<std::string>> runs{
        {"simulate", "--n", "4", "--m", "15", "--trials", "200000", "--seed", "99", "--format", "json"},
        {"simulate", "--n", "4", "--m", "15", "--trials", "200000", "--seed", "99", "--format", "csv"},
        {"pfa-curve", "--n", "4", "--m", "15", "--method", "mc", "--trials", "200000", "--seed", "7"},
        {"pd-curve", "--n", "4", "--m", "15", "--n0", "5", "--method", "mc", "--trials", "100000", "--format", "json"},
        {"roc", "--n", "8", "--m", "40", "--k", "8", "--n0", "6", "--method", "mc", "--averaged", "--trials", "20000",
         "--format", "json"},
        {"pd-curve", "--n", "8", "--m", "40", "--n0", "6", "--w1-source", "asymptotic-psi", "--format", "csv"},
    };
    bool ok = true;
    int compared = 0;
    for (const auto& base : runs) {
        std::string ref;
        for (const char* w : {"1", "4", "8"}) {
            for (int rep = 0; rep < 2; ++rep) {
                auto args = base;
                args.insert(args.end(), {"--workers", w});
                std::ostringstream o, e;
                if (cli::run_cli(args, o, e) != 0) {
                    return {false, "run failed: " + e.str()};
                }
                if (ref.empty()) ref = o.str();
                ok = ok && o.str() == ref;
                ++compared;
            }
        }
    }
    return {ok, std::to_string(runs.size()) + " artifacts x workers {1,4,8} x 2 repeats, " +
                    (ok ? "all byte-identical" : "MISMATCH")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"C1 degenerate exactness", c1_degenerate},
        {"C2 moment oracle", c2_moments},
        {"C3 Edgeworth accuracy", c3_edgeworth},
        {"C4 asymptotic cumulants", c4_asymptotic_cumulants},
        {"C5 Gaussian limit", c5_gaussian_limit},
        {"C6 c=1 branch", c6_c1_branch},
        {"C7 deterministic equivalents", c7_deterministic_equivalents},
        {"C8 threshold design", c8_threshold_design},
        {"C9 ROC monotonicity", c9_roc_monotonicity},
        {"C10 determinism", c10_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
                std::size(criteria));
    return failed == 0 ? 0 : 1;
}
