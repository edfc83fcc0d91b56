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

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sphericity/asymptotic_w0.hpp"
#include "sphericity/asymptotic_w1.hpp"
#include "sphericity/cli.hpp"
#include "sphericity/detector_design.hpp"
#include "sphericity/error.hpp"
#include "sphericity/glrt_moments.hpp"
#include "sphericity/monte_carlo.hpp"

namespace sphericity::cli {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr std::uint64_t kChannelSeedOffset = 0x9E3779B97F4A7C15ull;
constexpr int kDefaultGridPoints = 200;
constexpr std::uint64_t kDefaultTrials = 100000;
constexpr std::uint64_t kDefaultDraws = 100;

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(text, &pos, 0);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError(field + ": cannot parse seed '" + text + "'");
    }
}

std::uint64_t parse_trials(const std::string& text) {
    double v = 0.0;
    try {
        std::size_t pos = 0;
        v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw UsageError("--trials: cannot parse '" + text + "'");
    }
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
        throw UsageError("--trials: must be a positive integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------------------
// Shared run context

struct Context {
    const RunConfig& cfg;
    DetectorDims dims;
    int k;
    nlohmann::json provenance;
    std::vector<std::string> notes;

    explicit Context(const RunConfig& c)
        : cfg(c), dims(c.n, std::max(c.m, c.n)), k(c.k == 0 ? c.n : c.k) {
        provenance["tool"] = "sphericity";
        provenance["version"] = kVersion;
        provenance["seed"] = c.seed;
        provenance["seed_source"] = c.seed_source;
    }

    std::uint64_t trials(std::uint64_t fallback) const {
        return cfg.trials == 0 ? fallback : cfg.trials;
    }

    VarianceConvention convention() const {
        return cfg.variance == "unit" ? VarianceConvention::unit : VarianceConvention::one_over_n;
    }

    ChannelModel model() const {
        const double beta = static_cast<double>(k) / cfg.n;
        if (cfg.channel == "unequal") {
            return ChannelModel::unequal(beta, cfg.n0, cfg.sigma2, convention());
        }
        return ChannelModel::iid(beta, cfg.n0, convention());
    }

    std::uint64_t channel_seed() const { return cfg.seed + kChannelSeedOffset; }

    // Explicit spectrum, or one seeded channel draw.
    ChannelSpectrum spectrum() {
        if (!cfg.spectrum.empty()) {
            provenance["channel"] = "explicit-spectrum";
            return ChannelSpectrum(cfg.spectrum, cfg.n0);
        }
        provenance["channel"] = "seeded-draw";
        provenance["channel_seed"] = channel_seed();
        return sample_channel(model(), cfg.n, k, channel_seed());
    }

    W1Input w1_input() {
        provenance["w1_source"] = cfg.w1_source;
        if (cfg.w1_source == "asymptotic-psibar") {
            provenance["channel"] = "deterministic-equivalent";
            return psibar(model(), cfg.n);
        }
        ChannelSpectrum s = spectrum();
        if (cfg.w1_source == "exact") return s;
        return psi_from_eigenvalues(s);
    }

    CumulantMethod w1_method() const {
        return cfg.w1_source == "exact" ? CumulantMethod::exact : CumulantMethod::asymptotic;
    }

    CumulantMethod w0_method() const {
        return cfg.cumulants == "exact" ? CumulantMethod::exact : CumulantMethod::asymptotic;
    }

    SimPlan plan(Hypothesis h, std::uint64_t fallback_trials) {
        SimPlan p(dims);
        p.hypothesis = h;
        p.trials = trials(fallback_trials);
        p.seed = cfg.seed;
        p.workers = cfg.workers;
        p.n0 = cfg.n0;
        if (h == Hypothesis::h1) {
            if (cfg.averaged) {
                p.channel_model = model();
                p.k = k;
                provenance["mc_channel"] = "averaged";
            } else {
                p.spectrum = spectrum();
                provenance["mc_channel"] = "fixed";
            }
        }
        provenance["trials"] = p.trials;
        return p;
    }

    void absorb(const std::vector<std::string>& extra) {
        for (const auto& s : extra) notes.push_back(s);
    }
};

std::vector<double> grid_values(const GridSpec& g) { return linear_grid(g.start, g.stop, g.count); }

std::vector<double> default_eta_grid(double mu, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("default grid: zero spread; pass --grid explicitly");
    return linear_grid(mu - 6.0 * sigma, mu + 8.0 * sigma, kDefaultGridPoints);
}

std::string render(Context& ctx, const std::string& kind, const CurveTable& table,
                   const std::vector<std::string>& columns, bool with_std_err) {
    ctx.absorb(table.notes());
    if (ctx.cfg.format == "csv") return curve_csv(table, columns, with_std_err);
    nlohmann::json j;
    j["kind"] = kind;
    j["config"] = to_json(ctx.cfg);
    ctx.provenance["notes"] = ctx.notes;
    j["provenance"] = ctx.provenance;
    j["rows"] = curve_json_rows(table, columns);
    return j.dump(2) + "\n";
}

std::string render_report(Context& ctx, const std::string& kind, const nlohmann::json& report,
                          const std::string& csv) {
    if (ctx.cfg.format == "csv") return csv;
    nlohmann::json j;
    j["kind"] = kind;
    j["config"] = to_json(ctx.cfg);
    ctx.provenance["notes"] = ctx.notes;
    j["provenance"] = ctx.provenance;
    j["report"] = report;
    return j.dump(2) + "\n";
}

std::string num_or_empty(const nlohmann::json& v) {
    return v.is_number() ? format_number(v.get<double>()) : std::string();
}

// ---------------------------------------------------------------------------
// Subcommands

std::string cmd_pfa_curve(Context& ctx) {
    const auto& cfg = ctx.cfg;
    ctx.provenance["method"] = cfg.method;
    if (cfg.method == "mc") {
        const CumulantSet k = cfg.grid ? CumulantSet({0.0, 0.0}, CumulantSource::exact)
                                       : w0_cumulants(ctx.dims, ctx.w0_method(), 2);
        const auto grid = cfg.grid ? grid_values(*cfg.grid) : default_eta_grid(k.mean(), k.sigma());
        auto table = empirical_tail(ctx.plan(Hypothesis::h0, kDefaultTrials), grid);
        return render(ctx, "pfa-curve", table, {"eta", "p_fa"}, true);
    }
    PfaMethod method = PfaMethod::gaussian_limit;
    int L = 0;
    if (cfg.method != "gaussian-limit") {
        method = ctx.w0_method() == CumulantMethod::exact ? PfaMethod::exact : PfaMethod::asymptotic;
        L = cfg.method == "gaussian" ? 0 : cfg.L.value_or(2);
        ctx.provenance["L"] = L;
        ctx.provenance["cumulant_source"] = cfg.cumulants;
    }
    std::vector<double> grid;
    if (cfg.grid) {
        grid = grid_values(*cfg.grid);
    } else if (method == PfaMethod::gaussian_limit) {
        const auto g = gaussian_limit(ctx.dims.c());
        grid = default_eta_grid(g.mu_bar, std::sqrt(g.sigma2_bar) / cfg.n);
    } else {
        const auto k = w0_cumulants(ctx.dims, ctx.w0_method(), 2);
        grid = default_eta_grid(k.mean(), k.sigma());
    }
    if (method != PfaMethod::gaussian_limit && ctx.dims.square() &&
        ctx.w0_method() == CumulantMethod::asymptotic) {
        ctx.provenance["cumulant_source"] = "c1-branch";
    }
    auto table = pfa_curve(ctx.dims, grid, method, L);
    return render(ctx, "pfa-curve", table, {"eta", "p_fa"}, false);
}

std::string cmd_pd_curve(Context& ctx) {
    const auto& cfg = ctx.cfg;
    ctx.provenance["method"] = cfg.method;
    if (cfg.method == "gaussian-limit") {
        throw UsageError("--method: gaussian-limit has no H1 counterpart; use correction, gaussian or mc");
    }
    if (cfg.method == "mc") {
        auto plan = ctx.plan(Hypothesis::h1, kDefaultTrials);
        std::vector<double> grid;
        if (cfg.grid) {
            grid = grid_values(*cfg.grid);
        } else {
            const auto input = plan.spectrum ? W1Input(*plan.spectrum) : W1Input(psibar(ctx.model(), cfg.n));
            const auto method = plan.spectrum ? CumulantMethod::exact : CumulantMethod::asymptotic;
            const auto k = w1_cumulants(ctx.dims, input, method, 2);
            grid = default_eta_grid(k.mean(), k.sigma());
        }
        auto table = empirical_tail(plan, grid);
        return render(ctx, "pd-curve", table, {"eta", "p_d"}, true);
    }
    const int L = cfg.method == "gaussian" ? 0 : cfg.L.value_or(1);
    ctx.provenance["L"] = L;
    ctx.provenance["cumulant_source"] = std::string(to_string(ctx.w1_method()));
    const W1Input input = ctx.w1_input();
    std::vector<double> grid;
    if (cfg.grid) {
        grid = grid_values(*cfg.grid);
    } else {
        const auto k = w1_cumulants(ctx.dims, input, ctx.w1_method(), 2);
        grid = default_eta_grid(k.mean(), k.sigma());
    }
    auto table = pd_curve(ctx.dims, input, grid, ctx.w1_method(), L);
    return render(ctx, "pd-curve", table, {"eta", "p_d"}, false);
}

std::vector<double> alpha_values(const RunConfig& cfg) {
    if (!cfg.alpha_grid) return default_alpha_grid();
    return log_grid(cfg.alpha_grid->start, cfg.alpha_grid->stop, cfg.alpha_grid->count);
}

std::string cmd_roc(Context& ctx) {
    const auto& cfg = ctx.cfg;
    DesignSpec spec(ctx.dims);
    spec.method = cfg.design == "gaussian-limit" ? DesignMethod::gaussian_limit
                                                 : DesignMethod::full_correction;
    spec.cumulants = ctx.w0_method();
    ctx.provenance["design"] = cfg.design;
    ctx.provenance["design_cumulants"] = cfg.cumulants;
    ctx.provenance["method"] = cfg.method;
    const auto alphas = alpha_values(cfg);
    if (cfg.method == "mc") {
        auto res = sample_statistic(ctx.plan(Hypothesis::h1, kDefaultTrials));
        std::sort(res.samples.begin(), res.samples.end());
        std::vector<double> etas;
        for (double a : alphas) {
            DesignSpec s = spec;
            s.alpha0 = a;
            etas.push_back(design_threshold(s));
        }
        CurveTable table(CurveKind::roc);
        const double N = static_cast<double>(res.samples.size());
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const auto above = res.samples.end() -
                               std::upper_bound(res.samples.begin(), res.samples.end(), etas[i]);
            const double p = static_cast<double>(above) / N;
            table.push({alphas[i], p, p, std::sqrt(p * (1.0 - p) / N), etas[i]});
        }
        return render(ctx, "roc", table, {"p_fa", "p_d"}, true);
    }
    const int L = cfg.method == "gaussian" ? 0 : cfg.L.value_or(1);
    ctx.provenance["L"] = L;
    const W1Input input = ctx.w1_input();
    auto table = roc(spec, alphas, input, ctx.w1_method(), L);
    return render(ctx, "roc", table, {"p_fa", "p_d"}, false);
}

std::string cmd_design(Context& ctx) {
    const auto& cfg = ctx.cfg;
    DesignSpec spec(ctx.dims, cfg.alpha0);
    spec.cumulants = ctx.w0_method();
    spec.L = cfg.L.value_or(2);
    ctx.provenance["cumulant_source"] = cfg.cumulants;
    ctx.provenance["L"] = spec.L;
    const auto full = design_threshold_full(spec);
    nlohmann::json report;
    report["alpha0"] = cfg.alpha0;
    report["eta0_full"] = full.eta;
    report["predicted_pfa"] = full.pfa;
    report["bisection_iterations"] = full.iterations;
    report["bracket_widened"] = full.widened;
    report["raw_crossings"] = full.raw_crossings;
    const PfaMethod corr =
        spec.cumulants == CumulantMethod::exact ? PfaMethod::exact : PfaMethod::asymptotic;
    std::optional<double> eta_g;
    if (ctx.dims.square()) {
        report["eta0_gaussian"] = nullptr;
        ctx.notes.push_back("c = 1: the Gaussian-limit threshold is undefined");
    } else {
        eta_g = design_threshold_gaussian(spec);
        report["eta0_gaussian"] = *eta_g;
        report["predicted_pfa_gaussian"] = pfa(ctx.dims, *eta_g, corr, spec.L).value;
    }
    report["seeds"] = {{"mc", cfg.seed}};
    if (cfg.validate_mc) {
        auto res = sample_statistic(ctx.plan(Hypothesis::h0, 1000000));
        std::sort(res.samples.begin(), res.samples.end());
        auto realized = [&](double eta) {
            const auto above = res.samples.end() -
                               std::upper_bound(res.samples.begin(), res.samples.end(), eta);
            const double N = static_cast<double>(res.samples.size());
            const double p = static_cast<double>(above) / N;
            return nlohmann::json{{"pfa", p}, {"std_err", std::sqrt(p * (1.0 - p) / N)}};
        };
        report["mc_realized_pfa"] = realized(full.eta);
        if (eta_g) report["mc_realized_pfa_gaussian"] = realized(*eta_g);
        report["mc_trials"] = res.samples.size();
    }
    std::string csv = "field,value\n";
    for (const char* key : {"alpha0", "eta0_full", "predicted_pfa", "eta0_gaussian",
                            "predicted_pfa_gaussian"}) {
        if (report.contains(key)) csv += std::string(key) + "," + num_or_empty(report[key]) + "\n";
    }
    if (report.contains("mc_realized_pfa")) {
        csv += "mc_realized_pfa," + num_or_empty(report["mc_realized_pfa"]["pfa"]) + "\n";
        csv += "mc_realized_pfa_std_err," + num_or_empty(report["mc_realized_pfa"]["std_err"]) + "\n";
    }
    if (report.contains("mc_realized_pfa_gaussian")) {
        csv += "mc_realized_pfa_gaussian," +
               num_or_empty(report["mc_realized_pfa_gaussian"]["pfa"]) + "\n";
    }
    csv += "seed," + std::to_string(cfg.seed) + "\n";
    return render_report(ctx, "design", report, csv);
}

std::string cmd_cumulants(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const int P = cfg.order;
    std::optional<CumulantSet> exact;
    if (P <= ctx.dims.max_moment_order()) {
        exact = exact_cumulants_w0(ctx.dims, P);
    } else {
        ctx.notes.push_back("exact cumulants need P < n(m-n+1); exact column omitted");
    }
    std::optional<CumulantSet> asym;
    if (cfg.n >= 2) {
        try {
            asym = asymptotic_cumulants_w0(ctx.dims, P, 1);
            ctx.provenance["asymptotic_source"] = std::string(to_string(asym->source()));
            ctx.absorb(asym->notes());
        } catch (const ValidityError& e) {
            ctx.notes.push_back(e.what());
        }
    }
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "p,exact,asymptotic,relative_error\n";
    for (int p = 1; p <= P; ++p) {
        nlohmann::json r;
        r["p"] = p;
        r["exact"] = exact ? nlohmann::json(exact->k(p)) : nlohmann::json(nullptr);
        const bool has_asym = asym && p <= asym->order();
        r["asymptotic"] = has_asym ? nlohmann::json(asym->k(p)) : nlohmann::json(nullptr);
        if (exact && has_asym && exact->k(p) != 0.0) {
            r["relative_error"] = (asym->k(p) - exact->k(p)) / exact->k(p);
        } else {
            r["relative_error"] = nullptr;
        }
        csv += std::to_string(p) + "," + num_or_empty(r["exact"]) + "," +
               num_or_empty(r["asymptotic"]) + "," + num_or_empty(r["relative_error"]) + "\n";
        rows.push_back(std::move(r));
    }
    return render_report(ctx, "cumulants", rows, csv);
}

std::string cmd_det_equiv(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = ctx.model();
    const auto bar = psibar(model, cfg.n);
    ctx.provenance["convention"] = cfg.variance;
    nlohmann::json report;
    report["psibar"] = bar.values();
    if (model.kind == ChannelKind::unequal_variances) {
        const double n0 = model.convention == VarianceConvention::unit ? cfg.n0 / cfg.n : cfg.n0;
        const auto fp = fixed_point_delta(model.beta, n0, model.sigma2);
        report["delta"] = fp.delta;
        report["delta_tilde"] = fp.delta_tilde;
        report["fixed_point_residual"] = fp.residual;
    }
    const std::uint64_t draws = ctx.trials(kDefaultDraws);
    const auto gap = psibar_psi_gap(model, cfg.n, static_cast<int>(draws), ctx.channel_seed());
    report["draws"] = draws;
    ctx.provenance["channel_seed"] = ctx.channel_seed();
    std::string csv = "ell,psibar,median_gap,mean_gap,max_gap\n";
    nlohmann::json rows = nlohmann::json::array();
    for (int l = 0; l < 4; ++l) {
        rows.push_back({{"ell", l + 1}, {"psibar", bar.values()[l]}, {"median_gap", gap.median[l]},
                        {"mean_gap", gap.mean[l]}, {"max_gap", gap.max[l]}});
        csv += std::to_string(l + 1) + "," + format_number(bar.values()[l]) + "," +
               format_number(gap.median[l]) + "," + format_number(gap.mean[l]) + "," +
               format_number(gap.max[l]) + "\n";
    }
    report["rows"] = rows;
    return render_report(ctx, "det-equiv", report, csv);
}

std::string cmd_simulate(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const Hypothesis h = cfg.hypothesis == "h1" ? Hypothesis::h1 : Hypothesis::h0;
    auto plan = ctx.plan(h, kDefaultTrials);
    const auto res = sample_statistic(plan);
    if (!cfg.dump.empty()) write_dump(cfg.dump, plan, res.samples);
    ctx.provenance["resampled"] = res.resampled;
    ctx.provenance["healthy"] = res.healthy;
    const int P = std::min(cfg.order, 4);
    const auto moments = sample_moments(res.samples, P);
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "p,moment,std_err,exact_moment\n";
    for (int p = 1; p <= P; ++p) {
        nlohmann::json exact = nullptr;
        if (p <= ctx.dims.max_moment_order()) {
            if (h == Hypothesis::h0) {
                exact = exact_moment_w0(ctx.dims, p);
            } else if (plan.spectrum) {
                exact = exact_moment_w1(ctx.dims, *plan.spectrum, p);
            }
        }
        rows.push_back({{"p", p}, {"moment", moments[p - 1].value},
                        {"std_err", moments[p - 1].std_err}, {"exact_moment", exact}});
        csv += std::to_string(p) + "," + format_number(moments[p - 1].value) + "," +
               format_number(moments[p - 1].std_err) + "," + num_or_empty(exact) + "\n";
    }
    return render_report(ctx, "simulate", rows, csv);
}

// ---------------------------------------------------------------------------
// Argument parsing

struct Binder {
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> appliers;

    template <class T>
    void add(CLI::App* app, const std::string& name, const std::string& help,
             std::function<void(RunConfig&, const T&)> apply, std::shared_ptr<T> slot) {
        CLI::Option* opt = app->add_option(name, *slot, help);
        appliers.emplace_back(opt, [apply, slot](RunConfig& c) { apply(c, *slot); });
    }

    void flag(CLI::App* app, const std::string& name, const std::string& help,
              std::function<void(RunConfig&)> apply) {
        CLI::Option* opt = app->add_flag(name, help);
        appliers.emplace_back(opt, std::move(apply));
    }
};

template <class T>
std::shared_ptr<T> slot() {
    return std::make_shared<T>();
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"GLRT sphericity detector: distributions, thresholds and ROC curves", "sphericity"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"pfa-curve", "false-alarm probability vs threshold"},
        {"pd-curve", "detection probability vs threshold"},
        {"roc", "detection vs false-alarm probability"},
        {"design", "threshold design report"},
        {"cumulants", "exact vs asymptotic W0 cumulants"},
        {"det-equiv", "deterministic equivalents and their finite-n gaps"},
        {"simulate", "Monte Carlo sample moments, optional raw dump"},
    };

    std::vector<std::pair<CLI::App*, Binder>> binders;
    auto config_path = std::make_shared<std::string>();
    auto seed_text = std::make_shared<std::string>();
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        Binder b;
        sub->add_option("--config", *config_path, "JSON config or emitted report to start from");
        b.add<int>(sub, "--n", "antenna count", [](RunConfig& c, const int& v) { c.n = v; }, slot<int>());
        b.add<int>(sub, "--m", "sample count", [](RunConfig& c, const int& v) { c.m = v; }, slot<int>());
        b.add<int>(sub, "--k", "transmit streams (default n)",
                   [](RunConfig& c, const int& v) { c.k = v; }, slot<int>());
        b.add<double>(sub, "--n0", "noise power", [](RunConfig& c, const double& v) { c.n0 = v; },
                      slot<double>());
        b.add<std::string>(sub, "--channel", "iid | unequal",
                           [](RunConfig& c, const std::string& v) { c.channel = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--variance", "entry variance convention: unit | one-over-n",
                           [](RunConfig& c, const std::string& v) { c.variance = v; },
                           slot<std::string>());
        {
            auto sl = slot<std::vector<double>>();
            CLI::Option* o = sub->add_option("--sigma2", *sl, "comma-separated variance profile (length k)")
                                 ->delimiter(',');
            b.appliers.emplace_back(o, [sl](RunConfig& c) { c.sigma2 = *sl; });
        }
        {
            auto sl = slot<std::vector<double>>();
            CLI::Option* o =
                sub->add_option("--spectrum", *sl, "comma-separated eigenvalues of HH^dagger + N0 I")
                    ->delimiter(',');
            b.appliers.emplace_back(o, [sl](RunConfig& c) { c.spectrum = *sl; });
        }
        b.add<std::string>(sub, "--method", "correction | gaussian | gaussian-limit | mc",
                           [](RunConfig& c, const std::string& v) { c.method = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--cumulants", "W0 cumulants: exact | asymptotic",
                           [](RunConfig& c, const std::string& v) { c.cumulants = v; },
                           slot<std::string>());
        b.add<int>(sub, "--L", "Edgeworth order (W0 default 2, W1 default 1)",
                   [](RunConfig& c, const int& v) { c.L = v; }, slot<int>());
        b.add<std::string>(sub, "--w1-source", "exact | asymptotic-psi | asymptotic-psibar",
                           [](RunConfig& c, const std::string& v) { c.w1_source = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--design", "ROC threshold rule: full-correction | gaussian-limit",
                           [](RunConfig& c, const std::string& v) { c.design = v; },
                           slot<std::string>());
        b.add<double>(sub, "--alpha0", "target false-alarm probability",
                      [](RunConfig& c, const double& v) { c.alpha0 = v; }, slot<double>());
        b.add<std::string>(sub, "--hypothesis", "h0 | h1 (simulate)",
                           [](RunConfig& c, const std::string& v) { c.hypothesis = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--trials", "Monte Carlo trials or channel draws (e.g. 1e6)",
                           [](RunConfig& c, const std::string& v) { c.trials = parse_trials(v); },
                           slot<std::string>());
        {
            CLI::Option* o = sub->add_option("--seed", *seed_text, "64-bit seed (decimal or 0x hex)");
            b.appliers.emplace_back(o, [seed_text](RunConfig& c) {
                c.seed = parse_seed(*seed_text, "--seed");
                c.seed_source = "flag";
            });
        }
        b.add<int>(sub, "--workers", "Monte Carlo worker threads",
                   [](RunConfig& c, const int& v) { c.workers = v; }, slot<int>());
        b.add<std::string>(sub, "--grid", "threshold grid start:stop:count (inclusive)",
                           [](RunConfig& c, const std::string& v) { c.grid = parse_grid(v); },
                           slot<std::string>());
        b.add<std::string>(sub, "--alpha-grid", "log-spaced false-alarm grid start:stop:count",
                           [](RunConfig& c, const std::string& v) { c.alpha_grid = parse_grid(v); },
                           slot<std::string>());
        b.add<int>(sub, "--order", "cumulant/moment order",
                   [](RunConfig& c, const int& v) { c.order = v; }, slot<int>());
        b.flag(sub, "--averaged", "draw a fresh channel per Monte Carlo trial",
               [](RunConfig& c) { c.averaged = true; });
        b.flag(sub, "--validate-mc", "append Monte Carlo realized false-alarm rates",
               [](RunConfig& c) { c.validate_mc = true; });
        b.add<std::string>(sub, "--output", "output file (default stdout)",
                           [](RunConfig& c, const std::string& v) { c.output = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--format", "csv | json",
                           [](RunConfig& c, const std::string& v) { c.format = v; },
                           slot<std::string>());
        b.add<std::string>(sub, "--dump", "raw sample dump path (simulate)",
                           [](RunConfig& c, const std::string& v) { c.dump = v; },
                           slot<std::string>());
        binders.emplace_back(sub, std::move(b));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (auto& [sub, binder] : binders) {
        if (!sub->parsed()) continue;
        RunConfig cfg;
        if (!config_path->empty()) {
            std::ifstream is(*config_path);
            if (!is) throw UsageError("--config: cannot open " + *config_path);
            nlohmann::json j;
            try {
                is >> j;
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(std::string("--config: ") + e.what());
            }
            cfg = config_from_json(j);
        } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
            cfg.seed = parse_seed(env, kSeedEnv);
            cfg.seed_source = "env";
        }
        for (auto& [opt, apply] : binder.appliers) {
            if (opt->count() > 0) apply(cfg);
        }
        cfg.subcommand = sub->get_name();
        if (cfg.k == 0 && cfg.channel == "unequal" && !cfg.sigma2.empty()) {
            cfg.k = static_cast<int>(cfg.sigma2.size());
        }
        validate(cfg);
        return cfg;
    }
    throw UsageError("no subcommand given");
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    validate(config);
    Context ctx(config);
    std::string text;
    const std::string& s = config.subcommand;
    if (s == "pfa-curve") text = cmd_pfa_curve(ctx);
    else if (s == "pd-curve") text = cmd_pd_curve(ctx);
    else if (s == "roc") text = cmd_roc(ctx);
    else if (s == "design") text = cmd_design(ctx);
    else if (s == "cumulants") text = cmd_cumulants(ctx);
    else if (s == "det-equiv") text = cmd_det_equiv(ctx);
    else text = cmd_simulate(ctx);
    if (config.output.empty()) {
        out << text;
    } else {
        std::ofstream os(config.output, std::ios::binary);
        if (!os) throw ResourceError("cannot open output file " + config.output);
        os << text;
        if (!os) throw ResourceError("write failed for " + config.output);
    }
    for (const auto& note : ctx.notes) err << "note: " << note << "\n";
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_args(args, out);
        if (!cfg) return 0;
        return execute(*cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ValidityError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        err << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sphericity::cli
