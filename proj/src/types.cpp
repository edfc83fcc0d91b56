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

#include "sphericity/types.hpp"

#include <algorithm>
#include <cmath>

#include "sphericity/error.hpp"

namespace sphericity {

DetectorDims::DetectorDims(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw ValidityError("DetectorDims: n must be >= 1, got " + std::to_string(n));
    if (m < n) {
        throw ValidityError("DetectorDims: m must be >= n, got n=" + std::to_string(n) +
                            " m=" + std::to_string(m));
    }
}

ChannelSpectrum::ChannelSpectrum(std::vector<double> eigenvalues, double noise_floor)
    : y_(std::move(eigenvalues)), n0_(noise_floor) {
    if (y_.empty()) throw ValidityError("ChannelSpectrum: eigenvalue list is empty");
    if (!(n0_ > 0.0) || !std::isfinite(n0_)) {
        throw ValidityError("ChannelSpectrum: noise floor must be positive and finite");
    }
    for (double y : y_) {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw DomainError("ChannelSpectrum: eigenvalues must be positive and finite");
        }
    }
    std::sort(y_.begin(), y_.end());
}

ChannelSpectrum ChannelSpectrum::flat(int n, double value, double noise_floor) {
    if (n < 1) throw ValidityError("ChannelSpectrum::flat: n must be >= 1");
    return ChannelSpectrum(std::vector<double>(static_cast<std::size_t>(n), value), noise_floor);
}

std::string_view to_string(CumulantSource source) {
    switch (source) {
        case CumulantSource::exact: return "exact";
        case CumulantSource::asymptotic: return "asymptotic";
        case CumulantSource::c1_branch: return "c1-branch";
        case CumulantSource::empirical: return "empirical";
    }
    return "unknown";
}

CumulantSet::CumulantSet(std::vector<double> kappa, CumulantSource source,
                         std::optional<DetectorDims> dims)
    : kappa_(std::move(kappa)), sigma_(0.0), source_(source), dims_(dims) {
    if (kappa_.size() < 2) throw ValidityError("CumulantSet: need at least kappa_1 and kappa_2");
    for (double v : kappa_) {
        if (!std::isfinite(v)) throw DomainError("CumulantSet: non-finite cumulant");
    }
    if (kappa_[1] < 0.0) throw DomainError("CumulantSet: negative variance");
    sigma_ = std::sqrt(kappa_[1]);
}

double CumulantSet::k(int p) const {
    if (p < 1 || p > order()) {
        throw ValidityError("CumulantSet: kappa_" + std::to_string(p) + " not available (order " +
                            std::to_string(order()) + ")");
    }
    return kappa_[static_cast<std::size_t>(p - 1)];
}

CumulantSet CumulantSet::truncated(int P) const {
    if (P < 2 || P > order()) throw ValidityError("CumulantSet::truncated: bad order");
    CumulantSet out(std::vector<double>(kappa_.begin(), kappa_.begin() + P), source_, dims_);
    out.notes_ = notes_;
    return out;
}

}  // namespace sphericity
