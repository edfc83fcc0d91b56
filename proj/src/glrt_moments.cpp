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

#include "sphericity/glrt_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "sphericity/error.hpp"
#include "sphericity/specfun.hpp"

namespace sphericity {

namespace {

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

using W0Key = std::tuple<int, int, int>;
using W1Key = std::tuple<int, int, int, int, std::vector<double>>;

struct MomentCache {
    std::mutex mutex;
    std::map<W0Key, double> w0;
    std::map<W1Key, double> w1;
};

MomentCache& cache() {
    static MomentCache instance;
    return instance;
}

void check_order(const DetectorDims& dims, int p, const char* who) {
    const long long limit = static_cast<long long>(dims.n()) * (dims.m() - dims.n() + 1);
    if (p < 1 || p >= limit) {
        throw ValidityError(std::string(who) + ": moment order p=" + std::to_string(p) +
                            " requires 1 <= p < n(m-n+1) = " + std::to_string(limit));
    }
}

// ln of the factor shared by both moments:
//   prod_{j=0}^{n-1} Gamma(m-n+1-p/n+j) / Gamma(m-n+1+j) / n^p.
double log_common_factor(const DetectorDims& dims, int p) {
    const int n = dims.n();
    const int m = dims.m();
    const double shift = -static_cast<double>(p) / n;
    double acc = -p * std::log(static_cast<double>(n));
    for (int j = 0; j < n; ++j) acc += specfun::log_gamma_ratio(m - n + 1.0 + j, shift);
    return acc;
}

double compute_w0(const DetectorDims& dims, int p) {
    const double mn = static_cast<double>(dims.n()) * dims.m();
    // Gamma(mn) / Gamma(mn - p) for integer p.
    double acc = 0.0;
    for (int i = 1; i <= p; ++i) acc += std::log(mn - i);
    return std::exp(acc + log_common_factor(dims, p));
}

// Per-eigenvalue log weights T[i][k] = ln[Gamma(a+k) / (Gamma(a) k!)] + k ln y_i
// with y normalized to unit geometric mean, and a = m - p/n.
struct W1Weights {
    std::vector<std::vector<double>> t;
    double offset = 0.0;  // upper bound on the log weight of any composition
};

W1Weights w1_weights(const DetectorDims& dims, const std::vector<double>& y, int p) {
    const int n = dims.n();
    const double a = dims.m() - static_cast<double>(p) / n;
    double mean_log = 0.0;
    for (double v : y) mean_log += std::log(v);
    mean_log /= n;

    std::vector<double> base(static_cast<std::size_t>(p) + 1);
    for (int k = 0; k <= p; ++k) {
        base[k] = specfun::log_gamma_ratio(a, k) - specfun::log_gamma(k + 1.0);
    }
    W1Weights w;
    w.t.resize(static_cast<std::size_t>(n));
    double slope = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double ly = std::log(y[i]) - mean_log;
        auto& row = w.t[i];
        row.resize(static_cast<std::size_t>(p) + 1);
        for (int k = 0; k <= p; ++k) {
            row[k] = base[k] + k * ly;
            if (k > 0) slope = std::max(slope, row[k] / k);
        }
    }
    w.offset = p * slope;
    return w;
}

double sum_enumeration(const W1Weights& w, int n, int p) {
    // Colexicographic order: the last coordinate is fixed outermost, k_1
    // absorbs the remainder. Log weights are accumulated along the path.
    NeumaierSum total;
    std::vector<int> remaining(static_cast<std::size_t>(n) + 1);
    std::vector<int> k(static_cast<std::size_t>(n));
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1);
    int i = n - 1;
    remaining[n] = p;
    prefix[n] = 0.0;
    if (n == 1) {
        total.add(std::exp(w.t[0][p] - w.offset));
        return total.value();
    }
    k[i] = -1;
    while (i < n) {
        if (i == 0) {
            const int k0 = remaining[1];
            total.add(std::exp(prefix[1] + w.t[0][k0] - w.offset));
            i = 1;
            continue;
        }
        if (k[i] < remaining[i + 1]) {
            ++k[i];
            remaining[i] = remaining[i + 1] - k[i];
            prefix[i] = prefix[i + 1] + w.t[i][k[i]];
            --i;
            if (i > 0) k[i] = -1;
        } else {
            ++i;
        }
    }
    return total.value();
}

double sum_convolution(const W1Weights& w, int n, int p) {
    // Scale each series by exp(-k * slope) so that every coefficient is <= 1.
    const double slope = w.offset / p;
    std::vector<double> acc(static_cast<std::size_t>(p) + 1, 0.0);
    for (int k = 0; k <= p; ++k) acc[k] = std::exp(w.t[0][k] - k * slope);
    std::vector<double> next(acc.size());
    for (int i = 1; i < n; ++i) {
        for (int d = 0; d <= p; ++d) {
            NeumaierSum s;
            for (int k = 0; k <= d; ++k) s.add(acc[d - k] * std::exp(w.t[i][k] - k * slope));
            next[d] = s.value();
        }
        acc.swap(next);
    }
    return acc[p];
}

double compute_w1(const DetectorDims& dims, const std::vector<double>& y, int p,
                  W1Summation method) {
    const int n = dims.n();
    if (method == W1Summation::enumeration && composition_count(n, p) > kCompositionLimit) {
        throw ResourceError("exact_moment_w1: " + std::to_string(composition_count(n, p)) +
                            " compositions for n=" + std::to_string(n) + ", p=" +
                            std::to_string(p) +
                            " exceed the enumeration limit; use the convolution summation or "
                            "the asymptotic cumulants");
    }
    const W1Weights w = w1_weights(dims, y, p);
    const double s = method == W1Summation::enumeration ? sum_enumeration(w, n, p)
                                                        : sum_convolution(w, n, p);
    return std::exp(specfun::log_gamma(p + 1.0) + log_common_factor(dims, p) + w.offset +
                    std::log(s));
}

}  // namespace

std::uint64_t composition_count(int n, int p) {
    if (n < 1 || p < 0) return 0;
    // C(p + n - 1, min(p, n - 1)) with saturation.
    const std::uint64_t top = static_cast<std::uint64_t>(p) + n - 1;
    const std::uint64_t r = std::min<std::uint64_t>(p, n - 1);
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        const std::uint64_t f = top - r + i;
        if (c > std::numeric_limits<std::uint64_t>::max() / f) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        c = c * f / i;
    }
    return c;
}

double exact_moment_w0(const DetectorDims& dims, int p) {
    check_order(dims, p, "exact_moment_w0");
    if (dims.n() == 1) return 1.0;
    auto& c = cache();
    const W0Key key{dims.n(), dims.m(), p};
    {
        std::lock_guard lock(c.mutex);
        if (auto it = c.w0.find(key); it != c.w0.end()) return it->second;
    }
    const double v = compute_w0(dims, p);
    std::lock_guard lock(c.mutex);
    c.w0.emplace(key, v);
    return v;
}

double exact_moment_w1(const DetectorDims& dims, const ChannelSpectrum& spectrum, int p,
                       W1Summation method) {
    if (spectrum.size() != dims.n()) {
        throw ValidityError("exact_moment_w1: spectrum has " + std::to_string(spectrum.size()) +
                            " eigenvalues, expected n=" + std::to_string(dims.n()));
    }
    check_order(dims, p, "exact_moment_w1");
    if (dims.n() == 1) return 1.0;
    auto& c = cache();
    W1Key key{dims.n(), dims.m(), p, static_cast<int>(method), spectrum.eigenvalues()};
    {
        std::lock_guard lock(c.mutex);
        if (auto it = c.w1.find(key); it != c.w1.end()) return it->second;
    }
    const double v = compute_w1(dims, spectrum.eigenvalues(), p, method);
    std::lock_guard lock(c.mutex);
    c.w1.emplace(std::move(key), v);
    return v;
}

CumulantSet cumulants_from_moments(std::span<const double> moments, CumulantSource source,
                                   std::optional<DetectorDims> dims) {
    const std::size_t P = moments.size();
    if (P < 2) throw ValidityError("cumulants_from_moments: need at least two moments");
    std::vector<double> kappa(P);
    // binom[l] holds C(p-1, l) for the current p.
    std::vector<double> binom(P, 0.0);
    for (std::size_t p = 1; p <= P; ++p) {
        binom.assign(P, 0.0);
        binom[0] = 1.0;
        for (std::size_t l = 1; l < p; ++l) binom[l] = binom[l - 1] * double(p - l) / double(l);
        double v = moments[p - 1];
        for (std::size_t l = 1; l < p; ++l) v -= binom[l - 1] * kappa[l - 1] * moments[p - l - 1];
        kappa[p - 1] = v;
    }
    // Rounding can leave a tiny negative variance for a degenerate law.
    if (kappa[1] < 0.0 && kappa[1] > -64 * std::numeric_limits<double>::epsilon() *
                                            moments[1]) {
        kappa[1] = 0.0;
    }
    return CumulantSet(std::move(kappa), source, dims);
}

CumulantSet exact_cumulants_w0(const DetectorDims& dims, int P) {
    if (P < 2) throw ValidityError("exact_cumulants_w0: order P must be >= 2");
    check_order(dims, P, "exact_cumulants_w0");
    std::vector<double> mu(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p) mu[p - 1] = exact_moment_w0(dims, p);
    return cumulants_from_moments(mu, CumulantSource::exact, dims);
}

CumulantSet exact_cumulants_w1(const DetectorDims& dims, const ChannelSpectrum& spectrum,
                               int P) {
    if (P < 2) throw ValidityError("exact_cumulants_w1: order P must be >= 2");
    check_order(dims, P, "exact_cumulants_w1");
    std::vector<double> mu(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p) mu[p - 1] = exact_moment_w1(dims, spectrum, p);
    return cumulants_from_moments(mu, CumulantSource::exact, dims);
}

void clear_moment_cache() {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    c.w0.clear();
    c.w1.clear();
}

}  // namespace sphericity
