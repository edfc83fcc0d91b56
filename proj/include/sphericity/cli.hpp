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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphericity/curve.hpp"

/// Command-line surface: configuration, serialization, subcommands.
namespace sphericity::cli {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
inline constexpr const char* kSeedEnv = "SPHERICITY_SEED";

/// Invalid command line or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct GridSpec {
    double start;
    double stop;
    int count;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Parses "start:stop:count" (inclusive). Throws UsageError.
GridSpec parse_grid(const std::string& text);
std::string format_grid(const GridSpec& grid);

struct RunConfig {
    std::string subcommand;
    int n = 0;
    int m = 0;
    int k = 0;  // 0: k = n
    double n0 = 1.0;
    std::string channel = "iid";       // iid | unequal
    std::string variance = "unit";     // unit | one-over-n
    std::vector<double> sigma2;        // unequal profile, length k
    std::vector<double> spectrum;      // explicit eigenvalues of HH^dagger + N0 I
    std::string method = "correction"; // correction | gaussian | gaussian-limit | mc
    std::string cumulants = "exact";   // exact | asymptotic
    std::optional<int> L;
    std::string w1_source = "asymptotic-psibar";  // exact | asymptotic-psi | asymptotic-psibar
    std::string design = "full-correction";       // full-correction | gaussian-limit
    double alpha0 = 0.01;
    std::string hypothesis = "h0";    // h0 | h1 (simulate)
    std::uint64_t trials = 0;  // 0: subcommand default
    std::uint64_t seed = kDefaultSeed;
    std::optional<GridSpec> grid;
    std::optional<GridSpec> alpha_grid;
    int order = 4;  // cumulant table order
    bool averaged = false;
    bool validate_mc = false;
    std::string format = "csv";  // csv | json

    // Execution settings; not serialized and not part of the identity.
    int workers = 1;
    std::string output;
    std::string dump;
    std::string seed_source = "default";  // flag | env | default | config

    /// Compares the serialized fields only.
    bool same_run(const RunConfig& other) const;
};

nlohmann::json to_json(const RunConfig& config);

/// Accepts a bare config object or an emitted report with a "config" block.
RunConfig config_from_json(const nlohmann::json& j);

/// Validates cross-field consistency; throws UsageError naming the field.
void validate(const RunConfig& config);

/// Parses argv (without the program name). Throws UsageError; returns
/// std::nullopt when help was printed.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Runs a validated config; returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute with the exit-code contract: 0 ok, 1 numeric
/// failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, locale independent.
std::string format_number(double v);

/// CSV text for a table under the given column names. `with_std_err` adds the
/// std_err column; ROC tables emit (abscissa, value, eta).
std::string curve_csv(const CurveTable& table, const std::vector<std::string>& columns,
                      bool with_std_err);

nlohmann::json curve_json_rows(const CurveTable& table, const std::vector<std::string>& columns);

}  // namespace sphericity::cli
