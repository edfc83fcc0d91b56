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
#include <cmath>
#include <set>

#include "sphericity/cli.hpp"

namespace sphericity::cli {

namespace {

double parse_double(const std::string& s, const std::string& field) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw UsageError(field + ": cannot parse number '" + s + "'");
    }
    return v;
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed,
                    const std::string& field) {
    for (const char* a : allowed) {
        if (value == a) return;
    }
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw UsageError(field + ": '" + value + "' is not one of {" + list + "}");
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos ||
        text.find(':', b + 1) != std::string::npos) {
        throw UsageError("grid: expected start:stop:count, got '" + text + "'");
    }
    GridSpec g{parse_double(text.substr(0, a), "grid start"),
               parse_double(text.substr(a + 1, b - a - 1), "grid stop"), 0};
    const std::string count = text.substr(b + 1);
    const double c = parse_double(count, "grid count");
    if (c != std::floor(c) || c > 1e7) throw UsageError("grid: count must be an integer");
    g.count = static_cast<int>(c);
    if (g.count < 1) throw UsageError("grid: empty grid (count " + count + ")");
    if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
        throw UsageError("grid: end points must be finite");
    }
    if (g.count > 1 && !(g.start < g.stop)) throw UsageError("grid: start must be below stop");
    return g;
}

std::string format_grid(const GridSpec& grid) {
    return format_number(grid.start) + ":" + format_number(grid.stop) + ":" +
           std::to_string(grid.count);
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["subcommand"] = c.subcommand;
    j["n"] = c.n;
    j["m"] = c.m;
    j["k"] = c.k;
    j["n0"] = c.n0;
    j["channel"] = c.channel;
    j["variance"] = c.variance;
    j["sigma2"] = c.sigma2;
    j["spectrum"] = c.spectrum;
    j["method"] = c.method;
    j["cumulants"] = c.cumulants;
    j["L"] = c.L ? nlohmann::json(*c.L) : nlohmann::json(nullptr);
    j["w1_source"] = c.w1_source;
    j["design"] = c.design;
    j["alpha0"] = c.alpha0;
    j["hypothesis"] = c.hypothesis;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["grid"] = c.grid ? nlohmann::json(format_grid(*c.grid)) : nlohmann::json(nullptr);
    j["alpha_grid"] =
        c.alpha_grid ? nlohmann::json(format_grid(*c.alpha_grid)) : nlohmann::json(nullptr);
    j["order"] = c.order;
    j["averaged"] = c.averaged;
    j["validate_mc"] = c.validate_mc;
    j["format"] = c.format;
    return j;
}

RunConfig config_from_json(const nlohmann::json& input) {
    const nlohmann::json& j = input.contains("config") ? input.at("config") : input;
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    static const std::set<std::string> known{
        "subcommand", "n", "m", "k", "n0", "channel", "variance", "sigma2", "spectrum",
        "method", "cumulants", "L", "w1_source", "design", "alpha0", "hypothesis", "trials", "seed", "grid",
        "alpha_grid", "order", "averaged", "validate_mc", "format"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw UsageError("config: unknown field '" + key + "'");
    }
    RunConfig c;
    try {
        auto get = [&](const char* key, auto& dst) {
            if (j.contains(key)) j.at(key).get_to(dst);
        };
        get("subcommand", c.subcommand);
        get("n", c.n);
        get("m", c.m);
        get("k", c.k);
        get("n0", c.n0);
        get("channel", c.channel);
        get("variance", c.variance);
        get("sigma2", c.sigma2);
        get("spectrum", c.spectrum);
        get("method", c.method);
        get("cumulants", c.cumulants);
        if (j.contains("L") && !j.at("L").is_null()) c.L = j.at("L").get<int>();
        get("w1_source", c.w1_source);
        get("design", c.design);
        get("alpha0", c.alpha0);
        get("hypothesis", c.hypothesis);
        get("trials", c.trials);
        get("seed", c.seed);
        if (j.contains("grid") && !j.at("grid").is_null()) {
            c.grid = parse_grid(j.at("grid").get<std::string>());
        }
        if (j.contains("alpha_grid") && !j.at("alpha_grid").is_null()) {
            c.alpha_grid = parse_grid(j.at("alpha_grid").get<std::string>());
        }
        get("order", c.order);
        get("averaged", c.averaged);
        get("validate_mc", c.validate_mc);
        get("format", c.format);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    c.seed_source = "config";
    return c;
}

bool RunConfig::same_run(const RunConfig& other) const {
    return to_json(*this) == to_json(other);
}

void validate(const RunConfig& c) {
    require_one_of(c.subcommand,
                   {"pfa-curve", "pd-curve", "roc", "design", "cumulants", "det-equiv", "simulate"},
                   "subcommand");
    const bool needs_m = c.subcommand != "det-equiv";
    if (c.n < 1) throw UsageError("--n: must be >= 1");
    if (needs_m && c.m < c.n) throw UsageError("--m: must be >= n");
    if (c.k != 0 && c.k < c.n) throw UsageError("--k: must be >= n (full-rank channel)");
    if (!(c.n0 > 0.0) || !std::isfinite(c.n0)) throw UsageError("--n0: must be > 0");
    require_one_of(c.channel, {"iid", "unequal"}, "--channel");
    require_one_of(c.variance, {"unit", "one-over-n"}, "--variance");
    require_one_of(c.method, {"correction", "gaussian", "gaussian-limit", "mc"}, "--method");
    require_one_of(c.cumulants, {"exact", "asymptotic"}, "--cumulants");
    require_one_of(c.w1_source, {"exact", "asymptotic-psi", "asymptotic-psibar"}, "--w1-source");
    require_one_of(c.design, {"full-correction", "gaussian-limit"}, "--design");
    require_one_of(c.format, {"csv", "json"}, "--format");
    if (c.L && *c.L < 0) throw UsageError("--L: must be >= 0");
    if (!(c.alpha0 > 0.0 && c.alpha0 < 1.0)) throw UsageError("--alpha0: must lie in (0, 1)");
    require_one_of(c.hypothesis, {"h0", "h1"}, "--hypothesis");
    if (c.workers < 1) throw UsageError("--workers: must be >= 1");
    if (c.order < 2 || c.order > 12) throw UsageError("--order: must be in [2, 12]");
    const int k = c.k == 0 ? c.n : c.k;
    if (c.channel == "unequal") {
        if (static_cast<int>(c.sigma2.size()) != k) {
            throw UsageError("--sigma2: profile length " + std::to_string(c.sigma2.size()) +
                             " differs from k = " + std::to_string(k));
        }
    } else if (!c.sigma2.empty()) {
        throw UsageError("--sigma2: only valid with --channel unequal");
    }
    for (double s : c.sigma2) {
        if (!(s >= 0.0)) throw UsageError("--sigma2: entries must be >= 0");
    }
    if (!c.spectrum.empty()) {
        if (static_cast<int>(c.spectrum.size()) != c.n) {
            throw UsageError("--spectrum: needs exactly n eigenvalues");
        }
        for (double y : c.spectrum) {
            if (!(y > 0.0)) throw UsageError("--spectrum: eigenvalues must be > 0");
        }
    }
    if (c.alpha_grid) {
        if (!(c.alpha_grid->start > 0.0 && c.alpha_grid->stop < 1.0)) {
            throw UsageError("--alpha-grid: levels must lie in (0, 1)");
        }
    }
}

}  // namespace sphericity::cli
