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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sphericity/asymptotic_w1.hpp"
#include "sphericity/curve.hpp"
#include "sphericity/types.hpp"

/// Monte Carlo sampling of W under either hypothesis.
///
/// Trials are split into chunks of `chunk` trials. Chunk c draws from its
/// own generator seeded by (seed, c), and results are stored by trial index,
/// so the output never depends on the worker count.
namespace sphericity {

enum class Hypothesis { h0, h1 };

enum class Sampler {
    /// Triangular factor of the complex Wishart matrix: diagonal squares are
    /// Gamma(m - i), the off-diagonal row sums Gamma(i). Cost O(n) per trial.
    cholesky_factor,
    /// Forms X = R^{1/2} Z, XX^dagger, and an LL^T factorization.
    explicit_matrix,
};

struct SimPlan {
    explicit SimPlan(DetectorDims d) : dims(d) {}

    DetectorDims dims;
    Hypothesis hypothesis = Hypothesis::h0;
    /// H1 with a fixed channel: eigenvalues of HH^dagger + N0 I.
    std::optional<ChannelSpectrum> spectrum;
    /// H1 with a fresh channel per trial (channel-averaged); k columns.
    std::optional<ChannelModel> channel_model;
    int k = 0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0xC0FFEE;
    std::uint64_t chunk = 1 << 16;
    Sampler sampler = Sampler::cholesky_factor;
    int workers = 1;
    /// Noise power under H0.
    double n0 = 1.0;

    /// Throws ValidityError on an inconsistent plan.
    void validate() const;
};

struct SampleResult {
    std::vector<double> samples;
    std::uint64_t resampled = 0;
    /// False when the resampled fraction exceeds 1e-6.
    bool healthy = true;
};

/// Chunk generator for (seed, chunk index).
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk);

SampleResult sample_statistic(const SimPlan& plan);

/// Eigenvalues of HH^dagger + N0 I for one draw of H (n x k).
ChannelSpectrum sample_channel(const ChannelModel& model, int n, int k, std::uint64_t seed);
ChannelSpectrum sample_channel(const ChannelModel& model, int n, int k, std::mt19937_64& rng);

/// P(W > eta) per grid point with binomial standard errors. `sorted` must be
/// ascending.
CurveTable empirical_tail(std::span<const double> sorted, std::span<const double> eta_grid,
                          CurveKind kind = CurveKind::pfa_vs_eta);
CurveTable empirical_tail(const SimPlan& plan, std::span<const double> eta_grid);

/// Unbiased k-statistics k_1 .. k_P, P <= 4.
CumulantSet empirical_cumulants(std::span<const double> samples, int P = 4);
CumulantSet empirical_cumulants(const SimPlan& plan, int P = 4);

struct MomentEstimate {
    double value;
    double std_err;
};

/// Sample means of W^p for p = 1..P with standard errors.
std::vector<MomentEstimate> sample_moments(std::span<const double> samples, int P);

/// sup |F_n(x) - Phi((x - mu) / sigma)|.
double ks_normal(std::span<const double> sorted, double mu, double sigma);

/// Two-sample Kolmogorov-Smirnov distance; both inputs ascending.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Raw little-endian dump: "SPHW0001", uint64 n, m, trials, seed, then the
/// samples as float64.
void write_dump(const std::string& path, const SimPlan& plan, std::span<const double> samples);

struct DumpContents {
    std::uint64_t n, m, trials, seed;
    std::vector<double> samples;
};

DumpContents read_dump(const std::string& path);

}  // namespace sphericity
