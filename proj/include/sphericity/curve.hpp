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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sphericity {

enum class CurveKind { pfa_vs_eta, pd_vs_eta, roc };

std::string_view to_string(CurveKind kind);

struct CurveRow {
    double abscissa;
    double value;
    double raw;
    std::optional<double> std_err;
    std::optional<double> eta;  // threshold behind a ROC row
};

/// Ordered (abscissa, probability) rows. Abscissae are strictly increasing
/// and values lie in [0, 1]; `push` enforces both.
class CurveTable {
public:
    explicit CurveTable(CurveKind kind) : kind_(kind) {}

    void push(CurveRow row);

    CurveKind kind() const noexcept { return kind_; }
    const std::vector<CurveRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    const std::vector<std::string>& notes() const noexcept { return notes_; }
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

private:
    CurveKind kind_;
    std::vector<CurveRow> rows_;
    std::vector<std::string> notes_;
};

/// `count` points from start to stop inclusive. count = 1 gives {start}.
/// Throws ValidityError on count < 1, non-finite ends, or start >= stop
/// with count > 1.
std::vector<double> linear_grid(double start, double stop, int count);

/// `count` logarithmically spaced points; requires 0 < start < stop.
std::vector<double> log_grid(double start, double stop, int count);

}  // namespace sphericity
