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

#include "sphericity/curve.hpp"

#include <cmath>

#include "sphericity/error.hpp"

namespace sphericity {

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::pfa_vs_eta: return "pfa-vs-eta";
        case CurveKind::pd_vs_eta: return "pd-vs-eta";
        case CurveKind::roc: return "roc";
    }
    return "unknown";
}

void CurveTable::push(CurveRow row) {
    if (!std::isfinite(row.abscissa)) throw DomainError("CurveTable: non-finite abscissa");
    if (!(row.value >= 0.0 && row.value <= 1.0)) {
        throw DomainError("CurveTable: value outside [0, 1]");
    }
    if (!rows_.empty() && !(row.abscissa > rows_.back().abscissa)) {
        throw ValidityError("CurveTable: abscissae must be strictly increasing");
    }
    rows_.push_back(row);
}

std::vector<double> linear_grid(double start, double stop, int count) {
    if (count < 1) throw ValidityError("grid: count must be >= 1");
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw ValidityError("grid: end points must be finite");
    }
    if (count == 1) return {start};
    if (!(start < stop)) throw ValidityError("grid: start must be below stop");
    std::vector<double> g(static_cast<std::size_t>(count));
    const double step = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) g[i] = start + step * i;
    g.back() = stop;
    return g;
}

std::vector<double> log_grid(double start, double stop, int count) {
    if (!(start > 0.0)) throw ValidityError("log grid: start must be positive");
    auto g = linear_grid(std::log(start), std::log(stop), count);
    for (double& v : g) v = std::exp(v);
    g.front() = start;
    if (count > 1) g.back() = stop;
    return g;
}

}  // namespace sphericity
