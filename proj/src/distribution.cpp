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

#include "sphericity/distribution.hpp"

#include <string>

#include "sphericity/asymptotic_w0.hpp"
#include "sphericity/error.hpp"
#include "sphericity/glrt_moments.hpp"

namespace sphericity {

namespace {

int required_order(int L) { return L == 0 ? 2 : L + 2; }

void check_exact_order(const DetectorDims& dims, int L) {
    const int P = required_order(L);
    if (P > dims.max_moment_order()) {
        throw ValidityError("Edgeworth order L=" + std::to_string(L) + " needs cumulants up to " +
                            std::to_string(P) + ", but moments exist only for p < n(m-n+1) = " +
                            std::to_string(dims.max_moment_order() + 1));
    }
}

}  // namespace

std::string_view to_string(CumulantMethod method) {
    return method == CumulantMethod::exact ? "exact" : "asymptotic";
}

CumulantSet w0_cumulants(const DetectorDims& dims, CumulantMethod method, int P) {
    if (method == CumulantMethod::exact) return exact_cumulants_w0(dims, P);
    return asymptotic_cumulants_w0(dims, P);
}

CumulantSet w1_cumulants(const DetectorDims& dims, const W1Input& channel, CumulantMethod method,
                         int P) {
    if (method == CumulantMethod::exact) {
        const auto* spectrum = std::get_if<ChannelSpectrum>(&channel);
        if (spectrum == nullptr) {
            throw ValidityError("exact W1 cumulants need the channel spectrum, not summaries");
        }
        return exact_cumulants_w1(dims, *spectrum, P);
    }
    if (P > 3) {
        throw UnsupportedError("asymptotic W1 cumulants are available up to kappa_3 only");
    }
    const PsiSummaries psi = std::holds_alternative<ChannelSpectrum>(channel)
                                 ? psi_from_eigenvalues(std::get<ChannelSpectrum>(channel))
                                 : std::get<PsiSummaries>(channel);
    return w1_cumulants_asymptotic(dims, psi, P);
}

EdgeworthSeries w0_series(const DetectorDims& dims, CumulantMethod method, int L) {
    if (L < 0) throw ValidityError("Edgeworth order L must be >= 0");
    if (method == CumulantMethod::exact) check_exact_order(dims, L);
    return EdgeworthSeries(w0_cumulants(dims, method, required_order(L)), L);
}

EdgeworthSeries w1_series(const DetectorDims& dims, const W1Input& channel, CumulantMethod method,
                          int L) {
    if (L < 0) throw ValidityError("Edgeworth order L must be >= 0");
    if (method == CumulantMethod::exact) check_exact_order(dims, L);
    if (method == CumulantMethod::asymptotic && L > 1) {
        throw UnsupportedError("Edgeworth order L=" + std::to_string(L) +
                               " for W1 needs kappa_4, which only the exact route provides");
    }
    return EdgeworthSeries(w1_cumulants(dims, channel, method, required_order(L)), L);
}

Probability cdf_w0(const DetectorDims& dims, double eta, CumulantMethod method, int L,
                   bool repaired) {
    const auto series = w0_series(dims, method, L);
    return repaired ? series.repaired_cdf(eta) : series.cdf(eta);
}

Probability cdf_w1(const DetectorDims& dims, const W1Input& channel, double eta,
                   CumulantMethod method, int L, bool repaired) {
    const auto series = w1_series(dims, channel, method, L);
    return repaired ? series.repaired_cdf(eta) : series.cdf(eta);
}

Probability complement(const Probability& p) { return {1.0 - p.value, 1.0 - p.raw}; }

}  // namespace sphericity
