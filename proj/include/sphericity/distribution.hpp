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

#include <string_view>
#include <variant>

#include "sphericity/asymptotic_w1.hpp"
#include "sphericity/edgeworth.hpp"
#include "sphericity/types.hpp"

namespace sphericity {

enum class CumulantMethod { exact, asymptotic };

std::string_view to_string(CumulantMethod method);

/// The channel behind W1: a concrete spectrum, or spectral summaries
/// (per-realization or deterministic equivalents).
using W1Input = std::variant<ChannelSpectrum, PsiSummaries>;

/// kappa_1..kappa_P of W0. The asymptotic route at c = 1 uses the unit-ratio
/// branch.
CumulantSet w0_cumulants(const DetectorDims& dims, CumulantMethod method, int P);

/// kappa_1..kappa_P of W1. exact needs a spectrum; asymptotic accepts either
/// input and supports P <= 3.
CumulantSet w1_cumulants(const DetectorDims& dims, const W1Input& channel, CumulantMethod method,
                         int P);

/// Edgeworth series for W0 (default L = 2) and W1 (default L = 1). The
/// required order L + 2 is checked against moment existence and the
/// available asymptotic orders, with a diagnostic naming both.
EdgeworthSeries w0_series(const DetectorDims& dims, CumulantMethod method, int L = 2);
EdgeworthSeries w1_series(const DetectorDims& dims, const W1Input& channel, CumulantMethod method,
                          int L = 1);

/// P(W0 <= eta), clamped; monotone-repaired unless `repaired` is false.
Probability cdf_w0(const DetectorDims& dims, double eta, CumulantMethod method, int L = 2,
                   bool repaired = true);

/// P(W1 <= eta), clamped; monotone-repaired unless `repaired` is false.
Probability cdf_w1(const DetectorDims& dims, const W1Input& channel, double eta,
                   CumulantMethod method, int L = 1, bool repaired = true);

/// 1 - F with both components mapped.
Probability complement(const Probability& p);

}  // namespace sphericity
