#include "linagg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "linagg/bounds.hpp"
#include "linagg/config.hpp"
#include "linagg/error.hpp"
#include "linagg/experiments.hpp"
#include "linagg/fejer.hpp"
#include "linagg/report.hpp"
#include "linagg/smallball.hpp"

namespace linagg {

namespace {

struct CommandInfo {
    std::string path;
    std::string description;
    std::string claim;
};

const std::vector<CommandInfo>& command_table() {
    static const std::vector<CommandInfo> table{
        {"smallball", "Bracket the small-ball constant beta0 of a dictionary",
         "beta0 lies between the Paley-Zygmund value (1 - kappa0^2) / R_m^2 and the smallest "
         "small-ball probability of any direction; it decays like 1/D for histograms and at "
         "least like D^{-3/4} for Fourier."},
        {"fejer", "Fejer kernel norms, small-ball probability and tail bound",
         "the Fejer direction of order l has small-ball probability at most "
         "(kappa0 ||F_l||_2 (l+1))^{-1/2} ~ 3^{1/4} sqrt2 kappa0^{-1/2} D^{-3/4}, and the kernel "
         "outside [-eps, eps] stays below (pi / eps)^2 / (l+1)."},
        {"erm", "Fit one least-squares estimator on a simulated sample",
         "the excess risk of the least-squares estimator on a D-dimensional model is close to "
         "D C_m^2 / n."},
        {"bounds", "Closed-form risk bounds and concentration radii",
         "risk bounds under a small-ball condition, the concentration interval of the excess "
         "risk and the concentration radii of the empirical process."},
        {"bounds theorem-a", "Excess-risk bound under a small-ball condition",
         "with probability at least 1 - exp(-beta0^2 n / 4) - 1/x the excess risk is at most "
         "(16 / (beta0 kappa0^2))^2 sigma^2 D x / n once n >= 400^2 D / beta0^2."},
        {"bounds interval", "Concentration interval of the excess risk",
         "for A_-(ln n)^2 <= D <= A_+ sqrt(n) / ln n the excess risk lies in "
         "(1 +- eps) D C_m^2 / n with high probability."},
        {"bounds lambda-class", "Risk bound on a weighted-l1 coefficient class",
         "on the class with weighted-l1 radius L1 and sup norm at least L2 the small-ball "
         "condition holds with kappa0 = 2^{-1/2} and beta0 = L2^2 / (8 C_nu^2 L1^4), giving an "
         "order D x / n bound on a dimension window."},
        {"bounds tails", "Bousquet and Klein-Rio deviation radii",
         "a supremum of a bounded empirical process exceeds its mean by more than "
         "sqrt(2 sigma^2 x / n) + eps mean + (1/eps + 1/3) b x / n with probability at most "
         "exp(-x), and falls below it by the Klein-Rio radius with probability at most exp(-x)."},
        {"bounds rio", "Lower bound on the mean of the empirical-process supremum",
         "the mean supremum is at least (1 - kappa_n A_1) sqrt(E sup^2) when the variance and "
         "envelope are small enough."},
        {"campaign", "Seeded Monte-Carlo campaigns with CSV and JSON reports",
         "empirical checks of concentration, rates, small-ball brackets, Gram-matrix "
         "operator norms and tail coverage."},
        {"campaign concentration", "Coverage of (1 +- eps) D C_m^2 / n by the excess risk",
         "the excess risk concentrates around D C_m^2 / n."},
        {"campaign rate", "Slope of the mean excess risk against D at fixed n",
         "the excess risk grows linearly in D, while the small-ball bound grows like D^{5/2} "
         "(Fourier) or D^3 (histogram)."},
        {"campaign beta0", "Small-ball brackets across a range of dimensions",
         "beta0 decays like 1/D for histograms and Haar, and at least like D^{-3/4} for "
         "Fourier."},
        {"campaign opnorm", "Operator norm of the Gram perturbation against n and D",
         "||A_{n,D}|| is of order (D / sqrt(n))(1 + sqrt(ln n / D)), and its weighted-l1 "
         "norm is at most (4 (D+1)^{nu+1} / (nu+1)) sqrt(3 ln n / n)."},
        {"campaign tails", "Exceedance frequency of the concentration radii of ||F||_2",
         "each concentration radius is exceeded with frequency at most exp(-x), and "
         "E||F||_2^2 = D C_m^2 / n."},
        {"manifest", "List every subcommand with the claim it checks",
         "none; prints the claim behind every subcommand."},
    };
    return table;
}

const CommandInfo& command_info(const std::string& path) {
    for (const auto& c : command_table()) {
        if (c.path == path) return c;
    }
    throw std::logic_error("no command " + path);
}

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
    bool list = false;
};

struct Binding {
    CLI::Option* option = nullptr;
    std::string key;
    std::vector<std::string> values;
};

const std::vector<FlagSpec> kDictionaryFlags{
    {"--kind", "dictionary.kind", "fourier, histogram, piecewise_poly or haar"},
    {"--dim", "dictionary.dim", "dimension D"},
    {"--level", "dictionary.level", "Haar resolution level"},
    {"--degree", "dictionary.degree", "piecewise polynomial degree"},
    {"--domain", "dictionary.domain", "0_2pi, minus_pi_pi or unit"},
};

const std::vector<FlagSpec> kProblemFlags{
    {"--target", "problem.target", "in_model, fourier_series or piecewise"},
    {"--coeffs", "problem.coeffs", "in-model coefficients", true},
    {"--decay", "problem.decay", "Fourier-series coefficient decay"},
    {"--amplitude", "problem.amplitude", "target amplitude"},
    {"--truncation", "problem.truncation", "Fourier-series truncation order"},
    {"--shape", "problem.shape", "step, tent or sawtooth"},
    {"--noise-level", "problem.noise_level", "constant or heteroscedastic"},
    {"--sigma", "problem.sigma", "noise level sigma0"},
    {"--noise", "problem.noise", "gaussian, uniform, rademacher or student_t"},
    {"--dof", "problem.dof", "Student-T degrees of freedom"},
};

const std::vector<FlagSpec> kGridFlags{
    {"--n", "grid.n", "sample sizes", true},
    {"--D", "grid.D", "dimensions", true},
    {"--replicates", "grid.replicates", "replicates per grid point"},
    {"--epsilons", "grid.epsilons", "relative interval half-widths", true},
    {"--x", "grid.x", "deviation levels", true},
    {"--alpha", "grid.alpha", "envelope exponent alpha"},
    {"--nu", "grid.nu", "record the weighted operator norm with this nu"},
};

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
}

std::string unquote(std::string s) {
    s = trim(std::move(s));
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

/// "key=value" or "key=[a, b]" into key and inputs.
std::pair<std::string, std::vector<std::string>> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + text + "'");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    std::vector<std::string> inputs;
    if (!value.empty() && value.front() == '[') {
        if (value.back() != ']') throw ParameterError("unterminated list in '" + text + "'");
        std::stringstream ss(value.substr(1, value.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!trim(item).empty()) inputs.push_back(unquote(item));
        }
    } else {
        inputs.push_back(unquote(value));
    }
    return {key, inputs};
}

Json parsed_value(const std::string& text) {
    if (text == "inf") return Json(nullptr);
    try {
        return Json::parse(text);
    } catch (const std::exception&) {
        return Json(text);
    }
}

Json config_block(const RunConfig& cfg) {
    Json values = Json::object();
    Json provenance = Json::object();
    for (const auto& key : config_keys()) {
        const auto text = config_value_text(cfg, key);
        values[key] = text ? parsed_value(*text) : Json(nullptr);
        const auto it = cfg.provenance.find(key);
        provenance[key] = it == cfg.provenance.end() ? "default" : it->second;
    }
    return {{"values", values}, {"provenance", provenance}};
}

Json constants_block(const RunConfig& cfg) {
    const auto& c = cfg.constants;
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    Json values{{"A0", opt(c.A0)},
                {"A_minus", c.A_minus},
                {"A_plus", c.A_plus},
                {"A1_minus", c.A1_minus},
                {"L_nu", opt(c.L_nu)}};
    return {{"label", "unspecified-constant"},
            {"note", "configuration values, not derived quantities"},
            {"values", values}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Runner {
  public:
    Runner(RunConfig cfg, std::string path, std::ostream& out, std::ostream& err)
        : cfg_(std::move(cfg)), path_(std::move(path)), out_(out), err_(err) {}

    int run() {
        const auto& s = cfg_.subcommand;
        if (s == "smallball") return smallball();
        if (s == "fejer") return fejer();
        if (s == "erm") return erm();
        if (s == "bounds") return bounds();
        if (s == "campaign") return campaign();
        throw ParameterError("unknown subcommand '" + s + "'");
    }

  private:
    Json document(Json result) const {
        Json doc;
        doc["metadata"] = metadata(cfg_.seed);
        doc["command"] = path_;
        doc["config"] = config_block(cfg_);
        doc["unspecified_constants"] = constants_block(cfg_);
        doc["result"] = std::move(result);
        return doc;
    }

    /// Calculators: JSON on stdout, summary on stderr, optional JSON file.
    int emit(Json result, const std::string& summary, bool ok) {
        const std::string name = cfg_.action.empty() ? cfg_.subcommand : cfg_.action;
        const std::string text = document(std::move(result)).dump(2) + "\n";
        out_ << text;
        if (!cfg_.output.empty()) write_text(report_path(cfg_.output, name, cfg_.seed, "json"), text);
        err_ << summary << (ok ? "" : " [check failed]") << "\n";
        return ok ? kExitOk : kExitCheckFailed;
    }

    /// Campaigns: CSV + JSON pair, summary lines on stdout.
    void write_pair(const std::string& csv, Json result) {
        const auto csv_path = report_path(cfg_.output, cfg_.action, cfg_.seed, "csv");
        const auto json_path = report_path(cfg_.output, cfg_.action, cfg_.seed, "json");
        write_text(csv_path, csv);
        write_text(json_path, document(std::move(result)).dump(2) + "\n");
        err_ << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    }

    int smallball() {
        const Dictionary dict = make_dictionary(dictionary_spec(cfg_));
        Beta0Options opts;
        opts.random_directions = cfg_.smallball.directions;
        opts.seed = cfg_.seed;
        const auto est = estimate_beta0(dict, cfg_.smallball.kappa0, opts);
        Json result = to_json(est);
        if (dict.kind() == DictionaryKind::Fourier) {
            result["fourier_asymptote"] = fourier_beta0_asymptote(dict.dim(), est.kappa0);
        }
        const bool ok = est.beta0_lower <= est.beta0_upper + 1e-12;
        result["bracket_ordered"] = ok;
        return emit(std::move(result),
                    to_string(dict.kind()) + " D=" + std::to_string(dict.dim()) +
                        " beta0 in [" + fmt(est.beta0_lower) + ", " + fmt(est.beta0_upper) +
                        "] worst=" + est.worst_tag,
                    ok);
    }

    int fejer() {
        const int l = cfg_.fejer.l;
        const double kappa0 = cfg_.fejer.kappa0;
        const FejerKernel kernel(l);
        const double prob = smallball_probability(kernel.as_model_function(), kappa0);
        const double bound = fejer_smallball_bound(l, kappa0);
        Json result{{"l", l},
                    {"D", kernel.dim()},
                    {"l2_norm_squared", kernel.l2_norm_squared()},
                    {"kappa0", kappa0},
                    {"smallball_probability", prob},
                    {"smallball_bound", bound},
                    {"asymptote", fourier_beta0_asymptote(kernel.dim(), kappa0)},
                    {"smallball_bound_holds", prob <= bound}};
        bool ok = prob <= bound;
        std::string summary = "l=" + std::to_string(l) + " P=" + fmt(prob) + " bound=" + fmt(bound);
        if (cfg_.fejer.epsilon) {
            const double eps = *cfg_.fejer.epsilon;
            const double tail_bound = fejer_tail_bound(l, eps);
            const double tail_sup = fejer_tail_sup(l + 1, eps);
            result["epsilon"] = eps;
            result["tail_bound"] = tail_bound;
            result["tail_sup_order_l_plus_1"] = tail_sup;
            result["tail_bound_holds"] = tail_sup <= tail_bound;
            ok = ok && tail_sup <= tail_bound;
            summary += " tail=" + fmt(tail_sup) + " tail_bound=" + fmt(tail_bound);
        }
        return emit(std::move(result), summary, ok);
    }

    int erm() {
        const RegressionProblem problem = make_problem(cfg_);
        const Projection proj = project_target(problem);
        if (cfg_.erm.n > std::numeric_limits<int>::max()) throw ParameterError("erm.n too large");
        const Dataset data = sample(problem, static_cast<int>(cfg_.erm.n), cfg_.seed);
        FitOptions opts;
        opts.nu = cfg_.erm.nu;
        opts.keep_matrices = false;
        const ErmFit f = try_fit(problem.dictionary(), data, proj.beta_m, opts);
        const double center = problem.dictionary().dim() * proj.oracle.Cm_sq / static_cast<double>(cfg_.erm.n);
        Json result{{"oracle", to_json(proj.oracle)}, {"fit", to_json(f)}, {"center", center}};
        result["ratio"] = center > 0.0 ? Json(f.excess_risk / center) : Json(nullptr);
        if (cfg_.erm.dump_data) {
            const auto path = report_path(cfg_.output, "erm-data", cfg_.seed, "csv");
            write_text(path, data.to_csv());
            err_ << "wrote " << path.string() << "\n";
        }
        return emit(std::move(result),
                    "n=" + std::to_string(cfg_.erm.n) + " D=" + std::to_string(problem.dictionary().dim()) +
                        " excess_risk=" + fmt(f.excess_risk) + " D*Cm^2/n=" + fmt(center),
                    f.solved);
    }

    int bounds() {
        const auto& b = cfg_.bounds;
        const auto& a = cfg_.action;
        if (a == "theorem-a") {
            BoundInputs in{b.beta0, b.kappa0, b.sigma, b.D, b.n, b.x, b.omega0_fail};
            const auto r = theorem_A_bound(in);
            return emit(to_json(r),
                        "risk_bound=" + fmt(r.risk_bound) + " failure=" + fmt(r.failure_prob) +
                            " n_min=" + fmt(r.n_min) + (r.valid ? "" : " (n < n_min)"),
                        true);
        }
        if (a == "interval") {
            double eps = 0.0;
            if (b.epsilon) {
                eps = *b.epsilon;
            } else if (cfg_.constants.A0) {
                eps = theorem2_epsilon(*cfg_.constants.A0, b.D, b.n);
            } else {
                throw ParameterError("bounds.epsilon or constants.A0 is required");
            }
            const auto r = theorem2_interval(b.Cm_sq, b.D, b.n, eps, cfg_.constants.A_minus,
                                             cfg_.constants.A_plus);
            Json result = to_json(r);
            result["epsilon"] = eps;
            result["center"] = b.D * b.Cm_sq / static_cast<double>(b.n);
            return emit(std::move(result),
                        "interval=(" + fmt(r.low) + ", " + fmt(r.high) + ")" +
                            (r.in_dimension_window ? "" : " (D outside the window)"),
                        true);
        }
        if (a == "lambda-class") {
            const auto r = theorem4_bound(LambdaClass{b.nu, b.L1, b.L2}, b.sigma, b.D, b.n, b.x,
                                          cfg_.constants.L_nu);
            return emit(to_json(r),
                        "risk_bound=" + fmt(r.risk_bound) + " window=[" + fmt(r.window_low) + ", " +
                            fmt(r.window_high) + "]" + (r.valid ? "" : " (D outside the window)"),
                        true);
        }
        if (a == "tails") {
            if (!b.epsilon) throw ParameterError("bounds.epsilon is required");
            const auto r = concentration_tail_bounds(b.sigmaF_sq, b.b, b.mean_sup, b.n, b.x, *b.epsilon);
            return emit(to_json(r), "bousquet=" + fmt(r.bousquet) + " klein_rio=" + fmt(r.klein_rio),
                        true);
        }
        if (a == "rio") {
            const auto r = rio_lower_mean_bound(b.mean_sq, b.sigma * b.sigma, b.b, b.n, b.kappa_n,
                                                cfg_.constants.A1_minus);
            return emit(to_json(r),
                        "lower=" + fmt(r.lower) + (r.valid ? "" : " (preconditions violated)"), true);
        }
        throw ParameterError("unknown bounds action '" + a + "'");
    }

    Campaign make_campaign() const {
        return Campaign{cfg_.action,      make_problem(cfg_), make_grid(cfg_), cfg_.grid.replicates,
                        cfg_.seed,        cfg_.workers,       cfg_.grid.nu};
    }

    int campaign() {
        const auto& a = cfg_.action;
        if (a == "beta0") {
            const Dictionary family = make_dictionary(dictionary_spec(cfg_));
            Beta0Options opts;
            opts.random_directions = cfg_.smallball.directions;
            opts.seed = cfg_.seed;
            const auto r = run_beta0_scaling(family, cfg_.grid.D, cfg_.smallball.kappa0, opts);
            for (const auto& row : r.rows) {
                out_ << "D=" << row.estimate.dim << " beta0_upper=" << fmt(row.estimate.beta0_upper)
                     << " beta0_lower=" << fmt(row.estimate.beta0_lower);
                if (row.fejer_probability) out_ << " fejer=" << fmt(*row.fejer_probability);
                out_ << "\n";
            }
            out_ << "slope upper=" << fmt(r.upper_fit.slope) << " lower=" << fmt(r.lower_fit.slope)
                 << "\n";
            write_pair(beta0_csv(r), to_json(r));
            return kExitOk;
        }
        const Campaign c = make_campaign();
        if (a == "concentration") {
            const auto r = run_concentration_campaign(c, cfg_.grid.epsilons);
            for (const auto& s : r.summaries) {
                out_ << "n=" << s.point.n << " D=" << s.point.D << " solved=" << s.solved
                     << " unsolved=" << s.unsolved << " median_ratio=" << fmt(s.median_ratio)
                     << " half_width=" << fmt(s.half_width);
                for (std::size_t i = 0; i < s.coverage.size(); ++i) {
                    out_ << " coverage(" << fmt(r.epsilon_grid[i]) << ")=" << fmt(s.coverage[i]);
                }
                out_ << "\n";
            }
            write_pair(records_csv(r), to_json(r));
            return kExitOk;
        }
        if (a == "rate") {
            const auto r = run_rate_sweep(c, cfg_.smallball.kappa0, cfg_.bounds.x);
            for (std::size_t i = 0; i < r.dims.size(); ++i) {
                out_ << "n=" << r.n << " D=" << r.dims[i] << " mean_excess=" << fmt(r.mean_excess[i])
                     << " corollary_envelope=" << fmt(r.corollary_envelope[i])
                     << " measured_envelope=" << fmt(r.measured_envelope[i]) << "\n";
            }
            out_ << "slope measured=" << fmt(r.measured.slope)
                 << " corollary=" << fmt(r.corollary_fit.slope)
                 << " measured_envelope=" << fmt(r.measured_envelope_fit.slope)
                 << (r.degenerate ? " (degenerate)" : "") << "\n";
            write_pair(records_csv(r.base), to_json(r));
            return kExitOk;
        }
        if (a == "opnorm") {
            const auto r = run_opnorm_scaling(c, cfg_.grid.alpha);
            for (const auto& row : r.rows) {
                out_ << "n=" << row.point.n << " D=" << row.point.D
                     << " median_opnorm=" << fmt(row.median_opnorm)
                     << " envelope=" << fmt(row.lemma1_envelope)
                     << " violations=" << row.lemma1_violations
                     << " median_lambda_opnorm=" << fmt(row.median_lambda_opnorm)
                     << " lambda_envelope=" << fmt(row.lemma3_envelope) << "\n";
            }
            for (const auto& [D, fit] : r.slope_vs_n) {
                out_ << "D=" << D << " slope_vs_n=" << fmt(fit.slope) << "\n";
            }
            write_pair(records_csv(r.base), to_json(r));
            return kExitOk;
        }
        if (a == "tails") {
            const auto r = run_tail_coverage(c, cfg_.grid.x);
            for (const auto& row : r.rows) {
                out_ << "x=" << fmt(row.x) << " upper=" << fmt(row.upper_frequency)
                     << " lower=" << fmt(row.lower_frequency) << " allowed=" << fmt(row.allowed)
                     << (row.vacuous ? " vacuous" : "") << (row.pass ? " pass" : " FAIL") << "\n";
            }
            out_ << "moment_ratio=" << fmt(r.moment_ratio) << (r.moment_pass ? " pass" : " FAIL")
                 << "\n";
            write_pair(records_csv(r.base), to_json(r));
            return r.pass ? kExitOk : kExitCheckFailed;
        }
        throw ParameterError("unknown campaign '" + a + "'");
    }

    RunConfig cfg_;
    std::string path_;
    std::ostream& out_;
    std::ostream& err_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json manifest_json() {
    Json list = Json::array();
    for (const auto& c : command_table()) {
        list.push_back({{"command", c.path}, {"description", c.description}, {"claim", c.claim}});
    }
    return list;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Least-squares regression on linear models: small-ball constants, risk bounds "
                 "and Monte-Carlo campaigns",
                 "linagg"};
    app.footer("Claim: see `linagg manifest` for the claim behind every subcommand.");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> assignments;
    bool dump_config = false;
    std::deque<Binding> bindings;
    app.add_option("--config", config_path, "TOML config file (flags override its values)");
    app.add_option("--set", assignments, "override any config key, key=value");
    app.add_flag("--dump-config", dump_config, "print the effective config and exit");
    auto bind = [&](CLI::App* target, const FlagSpec& spec) {
        Binding& b = bindings.emplace_back();
        b.key = spec.key;
        b.option = target->add_option(spec.flag, b.values, spec.help);
        if (spec.list) {
            b.option->delimiter(',');
        } else {
            b.option->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    };
    bind(&app, {"--seed", "seed", "master seed"});
    bind(&app, {"--workers", "workers", "worker threads (results do not depend on it)"});
    bind(&app, {"--output", "output", "output path prefix"});

    std::map<CLI::App*, std::string> paths;
    auto add_command = [&](CLI::App* parent, const std::string& name, const std::string& path) {
        const auto& info = command_info(path);
        CLI::App* sub = parent->add_subcommand(name, info.description);
        sub->footer("Claim: " + info.claim);
        sub->fallthrough();
        paths[sub] = path;
        return sub;
    };
    auto add_flags = [&](CLI::App* target, const std::vector<FlagSpec>& specs) {
        for (const auto& spec : specs) bind(target, spec);
    };

    CLI::App* smallball = add_command(&app, "smallball", "smallball");
    add_flags(smallball, kDictionaryFlags);
    add_flags(smallball, {{"--kappa0", "smallball.kappa0", "small-ball level kappa0"},
                          {"--directions", "smallball.directions", "random probe directions"}});

    CLI::App* fejer = add_command(&app, "fejer", "fejer");
    add_flags(fejer, {{"--l", "fejer.l", "kernel order l"},
                      {"--kappa0", "fejer.kappa0", "small-ball level kappa0"},
                      {"--epsilon", "fejer.epsilon", "tail half-width in (0, pi]"}});

    CLI::App* erm = add_command(&app, "erm", "erm");
    add_flags(erm, kDictionaryFlags);
    add_flags(erm, kProblemFlags);
    add_flags(erm, {{"--n", "erm.n", "sample size"},
                    {"--nu", "erm.nu", "also report the weighted operator norm"},
                    {"--dump-data", "erm.dump_data", "write the sample as CSV (true/false)"}});

    CLI::App* bounds = add_command(&app, "bounds", "bounds");
    bounds->require_subcommand(1);
    const std::vector<FlagSpec> risk_flags{
        {"--beta0", "bounds.beta0", "small-ball probability beta0"},
        {"--kappa0", "bounds.kappa0", "small-ball level kappa0"},
        {"--sigma", "bounds.sigma", "noise level"},
        {"--D", "bounds.D", "dimension"},
        {"--n", "bounds.n", "sample size"},
        {"--x", "bounds.x", "deviation level"},
    };
    CLI::App* theorem_a = add_command(bounds, "theorem-a", "bounds theorem-a");
    add_flags(theorem_a, risk_flags);
    add_flags(theorem_a, {{"--omega0-fail", "bounds.omega0_fail", "extra failure probability"}});
    CLI::App* interval = add_command(bounds, "interval", "bounds interval");
    add_flags(interval, {{"--Cm-sq", "bounds.Cm_sq", "C_m^2"},
                         {"--D", "bounds.D", "dimension"},
                         {"--n", "bounds.n", "sample size"},
                         {"--epsilon", "bounds.epsilon", "relative half-width"},
                         {"--A0", "constants.A0", "unspecified constant A0"},
                         {"--A-minus", "constants.A_minus", "unspecified window constant A_-"},
                         {"--A-plus", "constants.A_plus", "unspecified window constant A_+"}});
    CLI::App* lambda_class = add_command(bounds, "lambda-class", "bounds lambda-class");
    add_flags(lambda_class, {{"--nu", "bounds.nu", "weight exponent nu"},
                             {"--L1", "bounds.L1", "weighted-l1 radius"},
                             {"--L2", "bounds.L2", "sup-norm floor"},
                             {"--sigma", "bounds.sigma", "noise level"},
                             {"--D", "bounds.D", "dimension"},
                             {"--n", "bounds.n", "sample size"},
                             {"--x", "bounds.x", "deviation level"},
                             {"--L-nu", "constants.L_nu", "unspecified window constant L_nu"}});
    CLI::App* tails = add_command(bounds, "tails", "bounds tails");
    add_flags(tails, {{"--sigmaF-sq", "bounds.sigmaF_sq", "wimpy variance"},
                      {"--b", "bounds.b", "envelope bound"},
                      {"--mean-sup", "bounds.mean_sup", "mean of the supremum"},
                      {"--n", "bounds.n", "sample size"},
                      {"--x", "bounds.x", "deviation level"},
                      {"--epsilon", "bounds.epsilon", "mean multiplier eps"}});
    CLI::App* rio = add_command(bounds, "rio", "bounds rio");
    add_flags(rio, {{"--mean-sq", "bounds.mean_sq", "second moment of the supremum"},
                    {"--sigma", "bounds.sigma", "sqrt of the wimpy variance"},
                    {"--b", "bounds.b", "envelope bound"},
                    {"--n", "bounds.n", "sample size"},
                    {"--kappa-n", "bounds.kappa_n", "kappa_n in (0, 1)"},
                    {"--A1-minus", "constants.A1_minus", "unspecified constant A_1"}});

    CLI::App* campaign = add_command(&app, "campaign", "campaign");
    campaign->require_subcommand(1);
    for (const char* name : {"concentration", "rate", "beta0", "opnorm", "tails"}) {
        CLI::App* sub = add_command(campaign, name, std::string("campaign ") + name);
        add_flags(sub, kDictionaryFlags);
        add_flags(sub, kProblemFlags);
        add_flags(sub, kGridFlags);
        add_flags(sub, {{"--kappa0", "smallball.kappa0", "small-ball level kappa0"},
                        {"--directions", "smallball.directions", "random probe directions"},
                        {"--envelope-x", "bounds.x", "deviation level of the rate envelope"}});
    }

    CLI::App* manifest = add_command(&app, "manifest", "manifest");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    if (manifest->parsed()) {
        out << manifest_json().dump(2) << "\n";
        return kExitOk;
    }

    CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    const std::string path = paths.at(leaf);

    try {
        RunConfig cfg;
        std::vector<std::string> errors;
        if (!config_path.empty()) apply_config_text(cfg, read_file(config_path), errors);
        const auto space = path.find(' ');
        for (auto& e : {set_config_value(cfg, "subcommand", {path.substr(0, space)}, "flag"),
                        set_config_value(cfg, "action",
                                         {space == std::string::npos ? "" : path.substr(space + 1)},
                                         "flag")}) {
            if (!e.empty()) errors.push_back(e);
        }
        for (const auto& text : assignments) {
            try {
                const auto [key, inputs] = split_assignment(text);
                if (auto e = set_config_value(cfg, key, inputs, "flag"); !e.empty()) errors.push_back(e);
            } catch (const std::exception& e) {
                errors.push_back(e.what());
            }
        }
        for (const auto& b : bindings) {
            if (b.option->count() == 0) continue;
            if (auto e = set_config_value(cfg, b.key, b.values, "flag"); !e.empty()) errors.push_back(e);
        }
        for (auto& e : validate(cfg)) errors.push_back(std::move(e));
        if (!errors.empty()) throw ConfigError(std::move(errors));
        if (dump_config) {
            out << serialize(cfg);
            return kExitOk;
        }
        return Runner(std::move(cfg), path, out, err).run();
    } catch (const ConfigError& e) {
        for (const auto& msg : e.errors()) err << "config error: " << msg << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace linagg
