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

#include <charconv>

#include "sphericity/cli.hpp"

namespace sphericity::cli {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string curve_csv(const CurveTable& table, const std::vector<std::string>& columns,
                      bool with_std_err) {
    const bool roc = table.kind() == CurveKind::roc;
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    if (roc) out += ",eta";
    if (with_std_err) out += ",std_err";
    out += '\n';
    for (const auto& row : table.rows()) {
        out += format_number(row.abscissa);
        out += ',';
        out += format_number(row.value);
        if (roc) {
            out += ',';
            out += format_number(row.eta.value_or(0.0));
        }
        if (with_std_err) {
            out += ',';
            out += format_number(row.std_err.value_or(0.0));
        }
        out += '\n';
    }
    return out;
}

nlohmann::json curve_json_rows(const CurveTable& table, const std::vector<std::string>& columns) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows()) {
        nlohmann::json r;
        r[columns.at(0)] = row.abscissa;
        r[columns.at(1)] = row.value;
        r["raw"] = row.raw;
        if (row.eta) r["eta"] = *row.eta;
        if (row.std_err) r["std_err"] = *row.std_err;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace sphericity::cli
