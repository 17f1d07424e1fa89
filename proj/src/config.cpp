#include "linagg/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "linagg/error.hpp"

namespace linagg {

namespace {

std::string format_value(double v) {
    char buf[40];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    std::string s(buf, end);
    // keep floats recognizable as floats in the emitted text
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(long long v) { return std::to_string(v); }
std::string format_value(std::uint64_t v) { return std::to_string(v); }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(const std::string& v) {
    std::string out = "\"";
    for (char ch : v) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}
template <class T>
std::string format_value(const std::vector<T>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_value(v[i]);
    return out + "]";
}

template <class T>
bool parse_number(const std::string& text, T& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string parse_one(const std::string& text, double& out) {
    if (text == "inf") {
        out = std::numeric_limits<double>::infinity();
        return {};
    }
    return parse_number(text, out) ? std::string() : "expected a number, got '" + text + "'";
}
std::string parse_one(const std::string& text, int& out) {
    return parse_number(text, out) ? std::string() : "expected an integer, got '" + text + "'";
}
std::string parse_one(const std::string& text, long long& out) {
    return parse_number(text, out) ? std::string() : "expected an integer, got '" + text + "'";
}
std::string parse_one(const std::string& text, std::uint64_t& out) {
    return parse_number(text, out) ? std::string()
                                   : "expected a nonnegative integer, got '" + text + "'";
}
std::string parse_one(const std::string& text, bool& out) {
    if (text == "true" || text == "1") {
        out = true;
    } else if (text == "false" || text == "0") {
        out = false;
    } else {
        return "expected true or false, got '" + text + "'";
    }
    return {};
}
std::string parse_one(const std::string& text, std::string& out) {
    out = text;
    return {};
}

template <class T>
std::string parse_inputs(const std::vector<std::string>& inputs, T& out) {
    if (inputs.size() != 1) return "expected a single value";
    return parse_one(inputs.front(), out);
}
template <class T>
std::string parse_inputs(const std::vector<std::string>& inputs, std::vector<T>& out) {
    std::vector<T> values;
    for (const auto& s : inputs) {
        // flags may pass comma-separated lists as one token
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            if (item.empty()) continue;
            T v{};
            if (auto err = parse_one(item, v); !err.empty()) return err;
            values.push_back(v);
        }
    }
    out = std::move(values);
    return {};
}
template <class T>
std::string parse_inputs(const std::vector<std::string>& inputs, std::optional<T>& out) {
    T v{};
    if (auto err = parse_inputs(inputs, v); !err.empty()) return err;
    out = v;
    return {};
}

template <class T>
std::optional<std::string> text_of(const T& v) {
    return format_value(v);
}
template <class T>
std::optional<std::string> text_of(const std::optional<T>& v) {
    if (!v) return std::nullopt;
    return format_value(*v);
}

struct Field {
    std::string key;
    std::function<std::string(RunConfig&, const std::vector<std::string>&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class Access>
Field make_field(std::string key, Access access) {
    return {std::move(key),
            [access](RunConfig& c, const std::vector<std::string>& in) {
                return parse_inputs(in, access(c));
            },
            [access](const RunConfig& c) { return text_of(access(const_cast<RunConfig&>(c))); }};
}

#define LINAGG_FIELD(key, member) make_field(key, [](RunConfig& c) -> auto& { return c.member; })

const std::vector<Field>& registry() {
    static const std::vector<Field> fields{
        LINAGG_FIELD("subcommand", subcommand),
        LINAGG_FIELD("action", action),
        LINAGG_FIELD("seed", seed),
        LINAGG_FIELD("workers", workers),
        LINAGG_FIELD("output", output),
        LINAGG_FIELD("dictionary.kind", dictionary.kind),
        LINAGG_FIELD("dictionary.dim", dictionary.dim),
        LINAGG_FIELD("dictionary.level", dictionary.level),
        LINAGG_FIELD("dictionary.degree", dictionary.degree),
        LINAGG_FIELD("dictionary.domain", dictionary.domain),
        LINAGG_FIELD("problem.target", problem.target),
        LINAGG_FIELD("problem.coeffs", problem.coeffs),
        LINAGG_FIELD("problem.decay", problem.decay),
        LINAGG_FIELD("problem.amplitude", problem.amplitude),
        LINAGG_FIELD("problem.truncation", problem.truncation),
        LINAGG_FIELD("problem.shape", problem.shape),
        LINAGG_FIELD("problem.noise_level", problem.noise_level),
        LINAGG_FIELD("problem.sigma", problem.sigma),
        LINAGG_FIELD("problem.noise", problem.noise),
        LINAGG_FIELD("problem.dof", problem.dof),
        LINAGG_FIELD("grid.n", grid.n),
        LINAGG_FIELD("grid.D", grid.D),
        LINAGG_FIELD("grid.replicates", grid.replicates),
        LINAGG_FIELD("grid.epsilons", grid.epsilons),
        LINAGG_FIELD("grid.x", grid.x),
        LINAGG_FIELD("grid.alpha", grid.alpha),
        LINAGG_FIELD("grid.nu", grid.nu),
        LINAGG_FIELD("smallball.kappa0", smallball.kappa0),
        LINAGG_FIELD("smallball.directions", smallball.directions),
        LINAGG_FIELD("fejer.l", fejer.l),
        LINAGG_FIELD("fejer.kappa0", fejer.kappa0),
        LINAGG_FIELD("fejer.epsilon", fejer.epsilon),
        LINAGG_FIELD("erm.n", erm.n),
        LINAGG_FIELD("erm.nu", erm.nu),
        LINAGG_FIELD("erm.dump_data", erm.dump_data),
        LINAGG_FIELD("bounds.beta0", bounds.beta0),
        LINAGG_FIELD("bounds.kappa0", bounds.kappa0),
        LINAGG_FIELD("bounds.sigma", bounds.sigma),
        LINAGG_FIELD("bounds.D", bounds.D),
        LINAGG_FIELD("bounds.n", bounds.n),
        LINAGG_FIELD("bounds.x", bounds.x),
        LINAGG_FIELD("bounds.omega0_fail", bounds.omega0_fail),
        LINAGG_FIELD("bounds.Cm_sq", bounds.Cm_sq),
        LINAGG_FIELD("bounds.epsilon", bounds.epsilon),
        LINAGG_FIELD("bounds.nu", bounds.nu),
        LINAGG_FIELD("bounds.L1", bounds.L1),
        LINAGG_FIELD("bounds.L2", bounds.L2),
        LINAGG_FIELD("bounds.sigmaF_sq", bounds.sigmaF_sq),
        LINAGG_FIELD("bounds.b", bounds.b),
        LINAGG_FIELD("bounds.mean_sup", bounds.mean_sup),
        LINAGG_FIELD("bounds.mean_sq", bounds.mean_sq),
        LINAGG_FIELD("bounds.kappa_n", bounds.kappa_n),
        LINAGG_FIELD("constants.A0", constants.A0),
        LINAGG_FIELD("constants.A_minus", constants.A_minus),
        LINAGG_FIELD("constants.A_plus", constants.A_plus),
        LINAGG_FIELD("constants.A1_minus", constants.A1_minus),
        LINAGG_FIELD("constants.L_nu", constants.L_nu),
    };
    return fields;
}

#undef LINAGG_FIELD

const Field* find_field(const std::string& key) {
    for (const auto& f : registry()) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

const std::map<std::string, std::vector<std::string>>& actions() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"smallball", {""}},
        {"fejer", {""}},
        {"erm", {""}},
        {"bounds", {"theorem-a", "interval", "lambda-class", "tails", "rio"}},
        {"campaign", {"concentration", "rate", "beta0", "opnorm", "tails"}},
    };
    return table;
}

void check_dictionary(const DictionarySpec& spec, const std::string& field,
                      std::vector<std::string>& errors) {
    try {
        make_dictionary(spec);
    } catch (const std::exception& e) {
        errors.push_back(field + ": " + e.what());
    }
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : registry()) keys.push_back(f.key);
    return keys;
}

std::string set_config_value(RunConfig& cfg, const std::string& key,
                             const std::vector<std::string>& inputs, const std::string& source) {
    const Field* f = find_field(key);
    if (!f) return "unknown key '" + key + "'";
    std::string err = f->set(cfg, inputs);
    if (!err.empty()) return key + ": " + err;
    cfg.provenance[key] = source;
    return {};
}

std::optional<std::string> config_value_text(const RunConfig& cfg, const std::string& key) {
    const Field* f = find_field(key);
    if (!f) throw ParameterError("unknown key '" + key + "'");
    return f->get(cfg);
}

void apply_config_text(RunConfig& cfg, const std::string& text, std::vector<std::string>& errors) {
    std::istringstream in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const std::exception& e) {
        errors.push_back(std::string("config syntax: ") + e.what());
        return;
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (auto err = set_config_value(cfg, item.fullname(), item.inputs, "file"); !err.empty()) {
            errors.push_back(err);
        }
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> errors;
    apply_config_text(cfg, text, errors);
    for (auto& e : validate(cfg)) errors.push_back(std::move(e));
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errors;
    if (!cfg.subcommand.empty()) {
        const auto it = actions().find(cfg.subcommand);
        if (it == actions().end()) {
            errors.push_back("subcommand: unknown subcommand '" + cfg.subcommand + "'");
        } else if (std::find(it->second.begin(), it->second.end(), cfg.action) == it->second.end()) {
            errors.push_back("action: '" + cfg.action + "' is not an action of " + cfg.subcommand);
        }
    }
    if (cfg.workers < 1) errors.push_back("workers: must be at least 1");

    bool dictionary_ok = true;
    DictionarySpec spec;
    try {
        spec = dictionary_spec(cfg);
    } catch (const std::exception& e) {
        errors.push_back(std::string("dictionary: ") + e.what());
        dictionary_ok = false;
    }
    if (dictionary_ok) {
        check_dictionary(spec, "dictionary.dim", errors);
        for (int D : cfg.grid.D) {
            DictionarySpec s = spec;
            s.dim = D;
            s.level = -2;
            check_dictionary(s, "grid.D", errors);
        }
    }

    const auto& p = cfg.problem;
    if (p.target != "in_model" && p.target != "fourier_series" && p.target != "piecewise") {
        errors.push_back("problem.target: expected in_model, fourier_series or piecewise");
    }
    if (p.target == "in_model" && !p.coeffs.empty() &&
        static_cast<int>(p.coeffs.size()) > cfg.dictionary.dim) {
        errors.push_back("problem.coeffs: more coefficients than dictionary.dim");
    }
    if (p.truncation < 1) errors.push_back("problem.truncation: must be positive");
    try {
        parse_piecewise_shape(p.shape);
    } catch (const std::exception& e) {
        errors.push_back(std::string("problem.shape: ") + e.what());
    }
    if (p.noise_level != "constant" && p.noise_level != "heteroscedastic") {
        errors.push_back("problem.noise_level: expected constant or heteroscedastic");
    }
    if (!(p.sigma >= 0.0)) errors.push_back("problem.sigma: must be nonnegative");
    try {
        if (parse_noise_law(p.noise) == NoiseLaw::StudentT && !(p.dof > 2.0)) {
            errors.push_back("problem.dof: Student-T degrees of freedom must exceed 2");
        }
    } catch (const std::exception& e) {
        errors.push_back(std::string("problem.noise: ") + e.what());
    }

    const auto& g = cfg.grid;
    if (g.n.empty()) errors.push_back("grid.n: at least one sample size is required");
    for (long long n : g.n) {
        if (n < 1) errors.push_back("grid.n: sample sizes must be positive");
    }
    if (g.D.empty()) errors.push_back("grid.D: at least one dimension is required");
    if (g.replicates < 1) errors.push_back("grid.replicates: must be at least 1");
    for (double e : g.epsilons) {
        if (!(e >= 0.0)) errors.push_back("grid.epsilons: values must be nonnegative");
    }
    for (double x : g.x) {
        if (!(x >= 0.0)) errors.push_back("grid.x: values must be nonnegative");
    }
    if (!(g.alpha > 0.0)) errors.push_back("grid.alpha: must be positive");
    if (g.nu && !(*g.nu > 0.0)) errors.push_back("grid.nu: must be positive");

    if (!(cfg.smallball.kappa0 > 0.0 && cfg.smallball.kappa0 < 1.0)) {
        errors.push_back("smallball.kappa0: must lie in (0, 1)");
    }
    if (cfg.smallball.directions < 1) errors.push_back("smallball.directions: must be at least 1");
    if (cfg.fejer.l < 1) errors.push_back("fejer.l: must be at least 1");
    if (!(cfg.fejer.kappa0 > 0.0 && cfg.fejer.kappa0 < 1.0)) {
        errors.push_back("fejer.kappa0: must lie in (0, 1)");
    }
    if (cfg.fejer.epsilon && !(*cfg.fejer.epsilon > 0.0 && *cfg.fejer.epsilon <= 3.141592653589793)) {
        errors.push_back("fejer.epsilon: must lie in (0, pi]");
    }
    if (cfg.erm.n < 1) errors.push_back("erm.n: must be positive");

    const auto& b = cfg.bounds;
    if (!(b.beta0 > 0.0 && b.beta0 <= 1.0)) errors.push_back("bounds.beta0: must lie in (0, 1]");
    if (!(b.kappa0 > 0.0 && b.kappa0 <= 1.0)) errors.push_back("bounds.kappa0: must lie in (0, 1]");
    if (!(b.sigma >= 0.0)) errors.push_back("bounds.sigma: must be nonnegative");
    if (b.D < 1) errors.push_back("bounds.D: must be positive");
    if (b.n < 1) errors.push_back("bounds.n: must be positive");
    if (!(b.x >= 0.0)) errors.push_back("bounds.x: must be nonnegative");
    if (!(b.L1 > 0.0) || !(b.L2 > 0.0)) errors.push_back("bounds.L1, bounds.L2: must be positive");
    if (!(b.nu > 0.0)) errors.push_back("bounds.nu: must be positive");
    return errors;
}

std::string serialize(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : registry()) {
        const auto value = f.get(cfg);
        const auto dot = f.key.find('.');
        const std::string sec = dot == std::string::npos ? "" : f.key.substr(0, dot);
        const std::string name = dot == std::string::npos ? f.key : f.key.substr(dot + 1);
        if (sec != section) {
            out += "\n[" + sec + "]\n";
            section = sec;
        }
        if (value) out += name + " = " + *value + "\n";
    }
    return out;
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
    std::map<std::string, std::string> echo;
    for (const auto& f : registry()) {
        if (auto v = f.get(cfg)) echo[f.key] = *v;
    }
    return echo;
}

DictionarySpec dictionary_spec(const RunConfig& cfg) {
    DictionarySpec spec;
    spec.kind = parse_dictionary_kind(cfg.dictionary.kind);
    spec.dim = cfg.dictionary.dim;
    spec.level = cfg.dictionary.level;
    spec.degree = cfg.dictionary.degree;
    spec.domain = Domain::parse(cfg.dictionary.domain);
    if (spec.kind != DictionaryKind::Fourier && cfg.provenance.count("dictionary.domain") == 0) {
        spec.domain = Domain::unit();
    }
    return spec;
}

RegressionProblem make_problem(const RunConfig& cfg) {
    const Dictionary dict = make_dictionary(dictionary_spec(cfg));
    const auto& p = cfg.problem;
    Target target;
    if (p.target == "in_model") {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(dict.dim());
        for (std::size_t i = 0; i < p.coeffs.size() && static_cast<int>(i) < dict.dim(); ++i) {
            c[static_cast<Eigen::Index>(i)] = p.coeffs[i];
        }
        target = InModelTarget{std::move(c)};
    } else if (p.target == "fourier_series") {
        target = FourierSeriesTarget{p.decay, p.amplitude, p.truncation};
    } else if (p.target == "piecewise") {
        target = PiecewiseSmoothTarget{parse_piecewise_shape(p.shape), p.amplitude};
    } else {
        throw ParameterError("unknown target '" + p.target + "'");
    }
    NoiseLevel level;
    level.kind = p.noise_level == "heteroscedastic" ? NoiseLevelKind::Heteroscedastic
                                                    : NoiseLevelKind::Constant;
    level.sigma0 = p.sigma;
    NoiseSpec noise;
    noise.law = parse_noise_law(p.noise);
    noise.dof = p.dof;
    return {dict, std::move(target), level, noise};
}

std::vector<GridPoint> make_grid(const RunConfig& cfg) {
    std::vector<GridPoint> grid;
    for (long long n : cfg.grid.n) {
        for (int D : cfg.grid.D) grid.push_back({n, D});
    }
    return grid;
}

}  // namespace linagg
