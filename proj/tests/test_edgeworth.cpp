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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sphericity/edgeworth.hpp"
#include "sphericity/error.hpp"
#include "sphericity/glrt_moments.hpp"
#include "sphericity/specfun.hpp"

using Catch::Matchers::WithinAbs;
using namespace sphericity;
using specfun::hermite_che;
using specfun::std_normal_cdf;
using specfun::std_normal_pdf;

namespace {

// Textbook second-order Edgeworth CDF in the standardized variable.
double edgeworth2(double z, double g1, double g2) {
    return std_normal_cdf(z) - std_normal_pdf(z) * (g1 / 6.0 * hermite_che(2, z) +
                                                    g2 / 24.0 * hermite_che(3, z) +
                                                    g1 * g1 / 72.0 * hermite_che(5, z));
}

}  // namespace

TEST_CASE("partition solutions enumerate integer partitions", "[edgeworth]") {
    const auto s3 = partition_solutions(3);
    REQUIRE(s3.size() == 3);
    CHECK(s3[0].j == std::vector<int>{3, 0, 0});
    CHECK(s3[0].r == 3);
    CHECK(s3[1].j == std::vector<int>{1, 1, 0});
    CHECK(s3[1].r == 2);
    CHECK(s3[2].j == std::vector<int>{0, 0, 1});
    CHECK(s3[2].r == 1);
    const std::size_t p[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int s = 1; s <= 10; ++s) {
        const auto sols = partition_solutions(s);
        CHECK(sols.size() == p[s - 1]);
        for (const auto& sol : sols) {
            int total = 0;
            int parts = 0;
            for (int i = 0; i < s; ++i) {
                total += (i + 1) * sol.j[i];
                parts += sol.j[i];
            }
            CHECK(total == s);
            CHECK(parts == sol.r);
        }
    }
}

TEST_CASE("L = 0 is the Gaussian CDF", "[edgeworth]") {
    const EdgeworthSeries s(CumulantSet({2.0, 0.25, 0.3, 0.1}, CumulantSource::exact), 0);
    for (double x : {1.0, 1.7, 2.0, 2.4, 3.0}) {
        CHECK_THAT(s.raw_cdf(x), WithinAbs(std_normal_cdf((x - 2.0) / 0.5), 1e-15));
    }
}

TEST_CASE("generic series matches the closed second-order form", "[edgeworth]") {
    const double mu = 1.3, var = 0.004, k3 = 1.1e-4, k4 = 5e-6;
    const double sig = std::sqrt(var);
    const EdgeworthSeries s(CumulantSet({mu, var, k3, k4}, CumulantSource::exact), 2);
    const double g1 = k3 / (sig * sig * sig), g2 = k4 / (var * var);
    for (double z = -5.0; z <= 5.0; z += 0.25) {
        CHECK_THAT(s.raw_cdf(mu + sig * z), WithinAbs(edgeworth2(z, g1, g2), 1e-12));
        CHECK_THAT(s.raw_cdf(mu + sig * z), WithinAbs(correction_G(z, sig, k3, k4), 1e-12));
    }
    const EdgeworthSeries s1(CumulantSet({mu, var, k3}, CumulantSource::exact), 1);
    for (double z = -4.0; z <= 4.0; z += 0.5) {
        const double ref = std_normal_cdf(z) - std_normal_pdf(z) * g1 / 6.0 * hermite_che(2, z);
        CHECK_THAT(s1.raw_cdf(mu + sig * z), WithinAbs(ref, 1e-13));
    }
}

TEST_CASE("correction_G reference value", "[edgeworth]") {
    CHECK_THAT(correction_G(1.0, 1.0, 0.0, 1.0), WithinAbs(0.8615090, 5e-8));
    CHECK_THROWS_AS(correction_G(1.0, 0.0, 0.1, 0.1), DomainError);
}

TEST_CASE("too few cumulants for the order is rejected", "[edgeworth]") {
    CHECK_THROWS_AS(EdgeworthSeries(CumulantSet({1.0, 0.1, 0.01}, CumulantSource::exact), 2),
                    ValidityError);
    CHECK_THROWS_AS(EdgeworthSeries(CumulantSet({1.0, 0.1}, CumulantSource::exact), -1),
                    std::exception);
}

TEST_CASE("repaired CDF is monotone and bounded", "[edgeworth]") {
    // Strong skew drives the raw series outside [0, 1] and non-monotone.
    const EdgeworthSeries s(CumulantSet({0.0, 1.0, 2.5, 6.0}, CumulantSource::exact), 2);
    double prev_value = 0.0;
    bool raw_bad = false;
    double prev_raw = s.raw_cdf(-8.0);
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        const auto p = s.repaired_cdf(x);
        CHECK(p.value >= 0.0);
        CHECK(p.value <= 1.0);
        CHECK(p.value >= prev_value - 1e-15);
        prev_value = p.value;
        if (p.raw < 0.0 || p.raw > 1.0 || p.raw < prev_raw - 1e-12) raw_bad = true;
        prev_raw = p.raw;
    }
    CHECK(raw_bad);
    CHECK_FALSE(s.stationary_points().empty());
}

TEST_CASE("repair only lifts the raw series where it is not monotone", "[edgeworth]") {
    const auto k = exact_cumulants_w0(DetectorDims(10, 20), 4);
    const EdgeworthSeries s(k, 2);
    // At (10, 20) the raw series dips below the left-tail local maximum
    // near z = -3, so the repair only vanishes in the body and right tail.
    for (double z = -6.0; z <= 6.0; z += 0.1) {
        const double x = k.mean() + z * k.sigma();
        const auto p = s.repaired_cdf(x);
        CHECK(p.value >= std::clamp(p.raw, 0.0, 1.0));
        if (z > -2.0) CHECK_THAT(p.value, WithinAbs(std::clamp(p.raw, 0.0, 1.0), 1e-12));
    }
}

TEST_CASE("higher orders converge toward the exact law for a Gamma variable", "[edgeworth]") {
    // Gamma(a, 1): kappa_p = a (p-1)!; CDF via the regularized lower gamma.
    const double a = 40.0;
    std::vector<double> k;
    double fact = 1.0;
    for (int p = 1; p <= 8; ++p) {
        k.push_back(a * fact);
        fact *= p;
    }
    auto gamma_cdf = [a](double x) {
        // Series for P(a, x).
        double term = 1.0 / a, sum = term;
        for (int i = 1; i < 2000; ++i) {
            term *= x / (a + i);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return std::exp(a * std::log(x) - x - std::lgamma(a)) * sum;
    };
    double err[4] = {0, 0, 0, 0};
    for (int L = 0; L <= 3; ++L) {
        const EdgeworthSeries s(CumulantSet(std::vector<double>(k.begin(), k.begin() + L + 2),
                                            CumulantSource::exact),
                                L);
        for (double x = 25.0; x <= 60.0; x += 0.5) {
            err[L] = std::max(err[L], std::fabs(s.raw_cdf(x) - gamma_cdf(x)));
        }
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[3] < err[2]);
}
