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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphericity/cli.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;
using namespace sphericity::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("usage errors exit with 2 and name the field", "[cli]") {
    auto r = run({"pfa-curve", "--n", "4", "--m", "15", "--grid", "1:2:0"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("grid"));
    r = run({"design", "--n", "10", "--m", "50", "--alpha0", "1.5"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("alpha0"));
    CHECK(run({"pfa-curve", "--n", "4", "--m", "15", "--bogus", "1"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"pfa-curve", "--n", "4", "--m", "3"}).code == 2);
    CHECK(run({"pfa-curve", "--n", "4", "--m", "15", "--method", "fancy"}).code == 2);
    CHECK(run({"pd-curve", "--n", "4", "--m", "15", "--method", "gaussian-limit"}).code == 2);
    CHECK(run({"simulate", "--n", "4", "--m", "15", "--trials", "1.5"}).code == 2);
    CHECK(run({"roc", "--n", "4", "--m", "15", "--channel", "unequal", "--k", "4", "--sigma2", "1,2"}).code == 2);
}

TEST_CASE("moment existence failures exit with 2", "[cli]") {
    const auto r = run({"pfa-curve", "--n", "4", "--m", "4", "--cumulants", "exact", "--grid", "2:3:3"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("n(m"));
}

TEST_CASE("help exits with 0", "[cli]") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("pfa-curve"));
    CHECK(run({"roc", "--help"}).code == 0);
}

TEST_CASE("pfa-curve CSV", "[cli]") {
    const auto r = run({"pfa-curve", "--n", "4", "--m", "15", "--method", "correction", "--grid", "1.05:2.4:200"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, StartsWith("eta,p_fa\n"));
    std::istringstream is(r.out);
    std::string line;
    int rows = -1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 200);
    const auto m = run({"pfa-curve", "--n", "4", "--m", "15", "--method", "mc", "--trials", "1e4", "--grid", "1.1:1.3:3"});
    REQUIRE(m.code == 0);
    CHECK_THAT(m.out, StartsWith("eta,p_fa,std_err\n"));
}

TEST_CASE("roc CSV header carries the threshold", "[cli]") {
    const auto r = run({"roc", "--n", "8", "--m", "40", "--k", "8", "--n0", "6", "--channel", "iid"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, StartsWith("p_fa,p_d,eta\n"));
}

TEST_CASE("design report", "[cli]") {
    const auto r = run({"design", "--n", "10", "--m", "50", "--alpha0", "0.01", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "design");
    CHECK_THAT(j["report"]["eta0_gaussian"].get<double>(), WithinAbs(1.1528, 5e-5));
    CHECK(j["report"].contains("eta0_full"));
    CHECK_FALSE(j["report"].contains("mc_realized_pfa"));
    const auto v = run({"design", "--n", "4", "--m", "20", "--validate-mc", "--trials", "2e4", "--format", "json"});
    REQUIRE(v.code == 0);
    const auto jv = nlohmann::json::parse(v.out);
    CHECK(jv["report"]["mc_realized_pfa"].contains("std_err"));
    const auto sq = run({"design", "--n", "6", "--m", "6", "--format", "json"});
    REQUIRE(sq.code == 0);
    CHECK(nlohmann::json::parse(sq.out)["report"]["eta0_gaussian"].is_null());
}

TEST_CASE("cumulant and deterministic-equivalent tables", "[cli]") {
    const auto c = run({"cumulants", "--n", "4", "--m", "15"});
    REQUIRE(c.code == 0);
    CHECK_THAT(c.out, StartsWith("p,exact,asymptotic,relative_error\n1,1.1497088"));
    const auto u = run({"cumulants", "--n", "16", "--m", "16", "--order", "3", "--format", "json"});
    REQUIRE(u.code == 0);
    CHECK(nlohmann::json::parse(u.out)["provenance"]["asymptotic_source"] == "c1-branch");
    const auto d = run({"det-equiv", "--n", "8", "--m", "40", "--n0", "6", "--variance", "one-over-n", "--trials", "5"});
    REQUIRE(d.code == 0);
    CHECK_THAT(d.out, ContainsSubstring("\n1,0.14421"));
    CHECK_THAT(d.out, ContainsSubstring("\n2,7,"));
    CHECK_THAT(d.out, ContainsSubstring("\n3,50,"));
    CHECK_THAT(d.out, ContainsSubstring("\n4,365,"));
}

TEST_CASE("config round trip", "[cli]") {
    RunConfig cfg;
    cfg.subcommand = "roc";
    cfg.n = 8;
    cfg.m = 40;
    cfg.k = 16;
    cfg.n0 = 6.0;
    cfg.L = 1;
    cfg.grid = GridSpec{1.0, 2.0, 11};
    cfg.alpha_grid = GridSpec{1e-3, 0.5, 7};
    cfg.seed = 0xDEADBEEFCAFEull;
    const auto back = config_from_json(to_json(cfg));
    CHECK(back.same_run(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(parse_grid(format_grid(*cfg.grid)) == *cfg.grid);

    auto j = to_json(cfg);
    j["surprise"] = 1;
    CHECK_THROWS_AS(config_from_json(j), UsageError);
}

TEST_CASE("an emitted report re-runs from --config", "[cli]") {
    const std::vector<std::string> args{"pfa-curve", "--n", "4", "--m", "15", "--grid", "1.1:1.5:9", "--format", "json"};
    const auto first = run(args);
    REQUIRE(first.code == 0);
    const auto path = temp_path("sphericity_cli_report.json");
    std::ofstream(path) << first.out;
    const auto second = run({"pfa-curve", "--config", path});
    REQUIRE(second.code == 0);
    auto a = nlohmann::json::parse(first.out);
    auto b = nlohmann::json::parse(second.out);
    CHECK(a["rows"] == b["rows"]);
    CHECK(a["config"] == b["config"]);
    // Flags override the file.
    const auto third = run({"pfa-curve", "--config", path, "--n", "5", "--m", "15"});
    REQUIRE(third.code == 0);
    CHECK(nlohmann::json::parse(third.out)["config"]["n"] == 5);
    std::filesystem::remove(path);
    CHECK(run({"pfa-curve", "--config", path}).code == 2);
}

TEST_CASE("seed precedence", "[cli]") {
    const std::vector<std::string> base{"simulate", "--n", "3", "--m", "9", "--trials", "2000", "--format", "json"};
    auto seed_of = [](const Run& r) {
        const auto j = nlohmann::json::parse(r.out);
        return std::pair{j["provenance"]["seed"].get<std::uint64_t>(),
                         j["provenance"]["seed_source"].get<std::string>()};
    };
    ::unsetenv(kSeedEnv);
    CHECK(seed_of(run(base)) == std::pair{kDefaultSeed, std::string("default")});
    ::setenv(kSeedEnv, "0x10", 1);
    CHECK(seed_of(run(base)) == std::pair{std::uint64_t{16}, std::string("env")});
    auto with_flag = base;
    with_flag.insert(with_flag.end(), {"--seed", "42"});
    CHECK(seed_of(run(with_flag)) == std::pair{std::uint64_t{42}, std::string("flag")});
    ::unsetenv(kSeedEnv);
}

TEST_CASE("output is byte-identical across worker counts", "[cli]") {
    for (std::string sub : {"simulate", "pfa-curve", "roc"}) {
        std::vector<std::string> args{sub, "--n", "4", "--m", "16", "--trials", "30000", "--seed", "7", "--format", "json"};
        if (sub != "simulate") args.insert(args.end(), {"--method", "mc"});
        std::string ref;
        for (const char* w : {"1", "4", "8"}) {
            auto a = args;
            a.insert(a.end(), {"--workers", w});
            const auto r = run(a);
            REQUIRE(r.code == 0);
            if (ref.empty()) ref = r.out;
            CHECK(r.out == ref);
        }
    }
}

TEST_CASE("--output writes the artifact", "[cli]") {
    const auto path = temp_path("sphericity_cli_out.csv");
    const auto r = run({"cumulants", "--n", "4", "--m", "15", "--output", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "p,exact,asymptotic,relative_error");
    std::filesystem::remove(path);
}

TEST_CASE("number formatting round-trips", "[cli]") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 1.1528126}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(7.0) == "7");
}
