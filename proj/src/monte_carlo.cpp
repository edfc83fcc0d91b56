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

#include "sphericity/monte_carlo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <exception>
#include <fstream>
#include <thread>

#include "sphericity/error.hpp"
#include "sphericity/specfun.hpp"

namespace sphericity {

namespace {

constexpr double kHealthThreshold = 1e-6;
constexpr char kDumpMagic[8] = {'S', 'P', 'H', 'W', '0', '0', '0', '1'};

// One trial of W for eigenvalues y from the triangular Wishart factor.
// Returns false when the draw is numerically singular.
template <class Rng>
bool bartlett_trial(const std::vector<double>& y, Rng& rng, double& out,
                    std::vector<std::gamma_distribution<double>>& diag,
                    std::vector<std::gamma_distribution<double>>& off) {
    const int n = static_cast<int>(y.size());
    double tr = 0.0;
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = diag[i](rng);
        const double o = i > 0 ? off[i](rng) : 0.0;
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        tr += y[i] * (d + o);
        logdet += std::log(y[i]) + std::log(d);
    }
    out = std::exp(std::log(tr / n) - logdet / n);
    return std::isfinite(out);
}

template <class Rng>
bool explicit_trial(const std::vector<double>& y, int m, Rng& rng, double& out) {
    const int n = static_cast<int>(y.size());
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd X(n, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            X(i, j) = std::sqrt(y[i]) * std::complex<double>(re, im);
        }
    }
    const Eigen::MatrixXcd G = X * X.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() != Eigen::Success) return false;
    const auto& L = llt.matrixLLT();
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) {
        const double l = L(i, i).real();
        if (!(l > 0.0)) return false;
        logdet += 2.0 * std::log(l);
    }
    const double tr = G.trace().real();
    out = std::exp(std::log(tr / n) - logdet / n);
    return std::isfinite(out);
}

struct ChunkOutcome {
    std::uint64_t resampled = 0;
    std::exception_ptr error;
};

void run_chunk(const SimPlan& plan, std::uint64_t chunk, double* dest, std::uint64_t count,
               ChunkOutcome& outcome) {
    auto rng = chunk_engine(plan.seed, chunk);
    const int n = plan.dims.n();
    const int m = plan.dims.m();
    std::vector<std::gamma_distribution<double>> diag;
    std::vector<std::gamma_distribution<double>> off;
    for (int i = 0; i < n; ++i) {
        diag.emplace_back(static_cast<double>(m - i), 1.0);
        off.emplace_back(i > 0 ? static_cast<double>(i) : 1.0, 1.0);
    }
    std::vector<double> y;
    const bool redraw = plan.hypothesis == Hypothesis::h1 && plan.channel_model.has_value();
    if (plan.hypothesis == Hypothesis::h0) {
        y.assign(static_cast<std::size_t>(n), plan.n0);
    } else if (!redraw) {
        y = plan.spectrum->eigenvalues();
    }
    for (std::uint64_t t = 0; t < count; ++t) {
        if (redraw) y = sample_channel(*plan.channel_model, n, plan.k, rng).eigenvalues();
        double w = 0.0;
        for (;;) {
            const bool ok = plan.sampler == Sampler::cholesky_factor
                                ? bartlett_trial(y, rng, w, diag, off)
                                : explicit_trial(y, m, rng, w);
            if (ok) break;
            ++outcome.resampled;
            if (outcome.resampled > count + 16) {
                throw ResourceError("sample_statistic: persistent singular draws");
            }
        }
        dest[t] = w;
    }
}

std::uint64_t read_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void write_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

}  // namespace

void SimPlan::validate() const {
    if (trials < 1) throw ValidityError("SimPlan: trials must be >= 1");
    if (chunk < 1) throw ValidityError("SimPlan: chunk must be >= 1");
    if (workers < 1) throw ValidityError("SimPlan: workers must be >= 1");
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw ValidityError("SimPlan: n0 must be > 0");
    if (hypothesis == Hypothesis::h1) {
        if (spectrum.has_value() == channel_model.has_value()) {
            throw ValidityError("SimPlan: H1 needs exactly one of a fixed spectrum or a channel model");
        }
        if (spectrum && spectrum->size() != dims.n()) {
            throw ValidityError("SimPlan: spectrum length differs from n");
        }
        if (channel_model) {
            channel_model->validate();
            if (k < dims.n()) {
                throw ValidityError("SimPlan: k must be >= n for a full-rank channel");
            }
        }
    }
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                      0x5eedu};
    return std::mt19937_64(seq);
}

SampleResult sample_statistic(const SimPlan& plan) {
    plan.validate();
    SampleResult result;
    result.samples.resize(plan.trials);
    if (plan.dims.n() == 1) {
        std::fill(result.samples.begin(), result.samples.end(), 1.0);
        return result;
    }
    const std::uint64_t chunks = (plan.trials + plan.chunk - 1) / plan.chunk;
    std::vector<ChunkOutcome> outcomes(chunks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            const std::uint64_t begin = c * plan.chunk;
            const std::uint64_t count = std::min(plan.chunk, plan.trials - begin);
            try {
                run_chunk(plan, c, result.samples.data() + begin, count, outcomes[c]);
            } catch (...) {
                outcomes[c].error = std::current_exception();
            }
        }
    };
    const auto nthreads =
        static_cast<std::uint64_t>(std::min<std::uint64_t>(plan.workers, chunks));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& o : outcomes) {
        if (o.error) std::rethrow_exception(o.error);
        result.resampled += o.resampled;
    }
    result.healthy = static_cast<double>(result.resampled) <=
                     kHealthThreshold * static_cast<double>(plan.trials);
    return result;
}

ChannelSpectrum sample_channel(const ChannelModel& model, int n, int k, std::mt19937_64& rng) {
    model.validate();
    if (n < 1) throw ValidityError("sample_channel: n must be >= 1");
    if (k < n) {
        throw ValidityError("sample_channel: k=" + std::to_string(k) + " < n=" +
                            std::to_string(n) + " leaves HH^dagger rank deficient");
    }
    if (model.kind == ChannelKind::unequal_variances &&
        static_cast<int>(model.sigma2.size()) != k) {
        throw ValidityError("sample_channel: sigma2 profile length differs from k");
    }
    const double var = model.convention == VarianceConvention::unit ? 1.0 : 1.0 / n;
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * var));
    Eigen::MatrixXcd H(n, k);
    for (int j = 0; j < k; ++j) {
        const double scale =
            model.kind == ChannelKind::unequal_variances ? std::sqrt(model.sigma2[j]) : 1.0;
        for (int i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            H(i, j) = scale * std::complex<double>(re, im);
        }
    }
    const Eigen::MatrixXcd G = H * H.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw SolverError("sample_channel: eigensolver failed", 0.0);
    const auto& ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    if (!(ev.minCoeff() > 1e-12 * std::max(top, 1e-300)) || !(top > 0.0)) {
        throw ValidityError("sample_channel: HH^dagger is not positive definite");
    }
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[i] = ev[i] + model.n0;
    return ChannelSpectrum(std::move(y), model.n0);
}

ChannelSpectrum sample_channel(const ChannelModel& model, int n, int k, std::uint64_t seed) {
    auto rng = chunk_engine(seed, 0);
    return sample_channel(model, n, k, rng);
}

CurveTable empirical_tail(std::span<const double> sorted, std::span<const double> eta_grid,
                          CurveKind kind) {
    if (sorted.empty()) throw ValidityError("empirical_tail: no samples");
    CurveTable table(kind);
    const double N = static_cast<double>(sorted.size());
    for (double eta : eta_grid) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), eta);
        const double p = static_cast<double>(above) / N;
        table.push({eta, p, p, std::sqrt(p * (1.0 - p) / N), std::nullopt});
    }
    return table;
}

CurveTable empirical_tail(const SimPlan& plan, std::span<const double> eta_grid) {
    auto res = sample_statistic(plan);
    std::sort(res.samples.begin(), res.samples.end());
    auto table = empirical_tail(res.samples, eta_grid,
                                plan.hypothesis == Hypothesis::h0 ? CurveKind::pfa_vs_eta
                                                                  : CurveKind::pd_vs_eta);
    if (res.resampled > 0) {
        table.add_note("resampled singular trials: " + std::to_string(res.resampled));
    }
    return table;
}

CumulantSet empirical_cumulants(std::span<const double> samples, int P) {
    if (P < 2 || P > 4) throw ValidityError("empirical_cumulants: order P must be in [2, 4]");
    const double N = static_cast<double>(samples.size());
    if (N < P + 1) throw ValidityError("empirical_cumulants: too few samples");
    long double mean = 0.0L;
    for (double v : samples) mean += v;
    mean /= N;
    long double s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
    for (double v : samples) {
        const long double d = v - mean;
        const long double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    const long double m2 = s2 / N, m3 = s3 / N, m4 = s4 / N;
    std::vector<double> k{static_cast<double>(mean), static_cast<double>(N / (N - 1) * m2)};
    if (P >= 3) k.push_back(static_cast<double>(N * N / ((N - 1) * (N - 2)) * m3));
    if (P >= 4) {
        k.push_back(static_cast<double>(N * N * ((N + 1) * m4 - 3 * (N - 1) * m2 * m2) /
                                        ((N - 1) * (N - 2) * (N - 3))));
    }
    return CumulantSet(std::move(k), CumulantSource::empirical);
}

CumulantSet empirical_cumulants(const SimPlan& plan, int P) {
    const auto res = sample_statistic(plan);
    auto out = empirical_cumulants(res.samples, P);
    if (res.resampled > 0) out.add_note("resampled singular trials: " + std::to_string(res.resampled));
    return out;
}

std::vector<MomentEstimate> sample_moments(std::span<const double> samples, int P) {
    if (P < 1) throw ValidityError("sample_moments: P must be >= 1");
    const double N = static_cast<double>(samples.size());
    if (N < 2) throw ValidityError("sample_moments: need at least two samples");
    std::vector<MomentEstimate> out;
    for (int p = 1; p <= P; ++p) {
        long double mean = 0.0L;
        for (double v : samples) mean += std::pow(static_cast<long double>(v), p);
        mean /= N;
        long double ss = 0.0L;
        for (double v : samples) {
            const long double d = std::pow(static_cast<long double>(v), p) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(static_cast<double>(ss / (N - 1)));
        out.push_back({static_cast<double>(mean), sd / std::sqrt(N)});
    }
    return out;
}

double ks_normal(std::span<const double> sorted, double mu, double sigma) {
    if (sorted.empty()) throw ValidityError("ks_normal: no samples");
    if (!(sigma > 0.0)) throw DomainError("ks_normal: sigma must be positive");
    const double N = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = specfun::std_normal_cdf((sorted[i] - mu) / sigma);
        d = std::max({d, (i + 1) / N - F, F - i / N});
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidityError("ks_two_sample: empty sample");
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

void write_dump(const std::string& path, const SimPlan& plan, std::span<const double> samples) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ResourceError("write_dump: cannot open " + path);
    os.write(kDumpMagic, sizeof kDumpMagic);
    write_u64_le(os, static_cast<std::uint64_t>(plan.dims.n()));
    write_u64_le(os, static_cast<std::uint64_t>(plan.dims.m()));
    write_u64_le(os, samples.size());
    write_u64_le(os, plan.seed);
    for (double v : samples) write_u64_le(os, std::bit_cast<std::uint64_t>(v));
    if (!os) throw ResourceError("write_dump: write failed for " + path);
}

DumpContents read_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ResourceError("read_dump: cannot open " + path);
    unsigned char header[40];
    is.read(reinterpret_cast<char*>(header), sizeof header);
    if (!is || std::memcmp(header, kDumpMagic, 8) != 0) {
        throw ValidityError("read_dump: bad header in " + path);
    }
    DumpContents out{read_u64_le(header + 8), read_u64_le(header + 16), read_u64_le(header + 24),
                     read_u64_le(header + 32), {}};
    out.samples.resize(out.trials);
    unsigned char buf[8];
    for (auto& v : out.samples) {
        is.read(reinterpret_cast<char*>(buf), 8);
        if (!is) throw ValidityError("read_dump: truncated sample block");
        v = std::bit_cast<double>(read_u64_le(buf));
    }
    return out;
}

}  // namespace sphericity
