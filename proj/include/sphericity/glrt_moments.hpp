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
#include <span>

#include "sphericity/types.hpp"

/// Exact moments of the sphericity statistic
///
///     W = (tr(XX^dagger) / n) / det(XX^dagger)^{1/n}
///
/// for complex Gaussian X (n x m) with covariance I (W0) or a full-rank
/// covariance with eigenvalues y (W1), and the moment -> cumulant map.
///
/// Moments are memoized process-wide; the cache is guarded by a mutex.
namespace sphericity {

/// Upper bound on the number of compositions k_1 + ... + k_n = p that the W1
/// moment is allowed to visit.
inline constexpr std::uint64_t kCompositionLimit = 100'000'000;

/// C(p + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t composition_count(int n, int p);

/// How the symmetric sum over compositions in the W1 moment is evaluated.
enum class W1Summation {
    enumeration,  ///< stream every composition, compensated summation
    convolution,  ///< coefficient of z^p in a product of n truncated series
};

/// E[W0^p]. Throws ValidityError unless 1 <= p < n(m - n + 1).
double exact_moment_w0(const DetectorDims& dims, int p);

/// E[W1^p] for the given spectrum. Scale invariant in the eigenvalues.
///
/// Throws ValidityError on the moment-existence condition or a spectrum of
/// the wrong length, ResourceError when enumeration would exceed
/// kCompositionLimit.
double exact_moment_w1(const DetectorDims& dims, const ChannelSpectrum& spectrum, int p,
                       W1Summation method = W1Summation::enumeration);

/// kappa_1 = mu_1, kappa_p = mu_p - sum_{l=1}^{p-1} C(p-1, l-1) kappa_l mu_{p-l}.
CumulantSet cumulants_from_moments(std::span<const double> moments,
                                   CumulantSource source = CumulantSource::exact,
                                   std::optional<DetectorDims> dims = std::nullopt);

/// kappa_1 ... kappa_P of W0 from exact moments. Requires P < n(m - n + 1).
CumulantSet exact_cumulants_w0(const DetectorDims& dims, int P);

/// kappa_1 ... kappa_P of W1 from exact moments. Requires P < n(m - n + 1).
CumulantSet exact_cumulants_w1(const DetectorDims& dims, const ChannelSpectrum& spectrum,
                               int P);

/// Drops every memoized moment.
void clear_moment_cache();

}  // namespace sphericity
