#include "linagg/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "linagg/error.hpp"
#include "linagg/fejer.hpp"

namespace linagg {

double smallball_probability(const ModelFunction& f, double kappa) {
    if (f.is_zero()) throw ParameterError("small-ball probability is undefined for the zero function");
    if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
    return superlevel_measure(f, kappa * f.coeffs().norm());
}

double SmallBallEstimate::v0_upper() const {
    return 1.0 / (beta0_lower * beta0_lower * std::pow(kappa0, 4));
}

double SmallBallEstimate::v0_lower() const {
    return 1.0 / (beta0_upper * beta0_upper * std::pow(kappa0, 4));
}

std::string SmallBallEstimate::csv_header() {
    return "kappa0,beta0_upper,beta0_lower,D,kind,worst_direction_tag";
}

std::string SmallBallEstimate::csv_row() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,", kappa0, beta0_upper, beta0_lower, dim);
    return std::string(buf) + to_string(kind) + "," + worst_tag;
}

double paley_zygmund_lower(const Dictionary& dict, double kappa) {
    return (1.0 - kappa * kappa) / sup_ratio_squared(dict);
}

namespace {

ModelFunction fejer_in(const Dictionary& dict, int order) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dict.dim());
    c[0] = 1.0;
    for (int k = 1; k < order && k <= dict.max_frequency(); ++k) {
        c[2 * k - 1] = std::numbers::sqrt2 * (1.0 - static_cast<double>(k) / order);
    }
    return {dict, std::move(c)};
}

}  // namespace

std::vector<std::pair<std::string, ModelFunction>> adversarial_directions(const Dictionary& dict) {
    std::vector<std::pair<std::string, ModelFunction>> out;
    switch (dict.kind()) {
        case DictionaryKind::Fourier: {
            const int l = dict.max_frequency();
            if (l >= 1) {
                out.emplace_back("fejer_l" + std::to_string(l), fejer_in(dict, l));
                out.emplace_back("fejer_l" + std::to_string(l + 1), fejer_in(dict, l + 1));
            }
            break;
        }
        case DictionaryKind::Histogram:
            out.emplace_back("cell_indicator", ModelFunction::basis(dict, 0));
            break;
        case DictionaryKind::HaarWavelet: {
            // sqrt(D) 1_{first cell} expanded in the Haar basis
            const auto values = cell_basis_values(dict);
            const double d = dict.dim();
            Eigen::VectorXd c(dict.dim());
            for (int i = 0; i < dict.dim(); ++i) c[i] = values[i] / std::sqrt(d);
            out.emplace_back("cell_indicator", ModelFunction(dict, std::move(c)));
            out.emplace_back("finest_wavelet", ModelFunction::basis(dict, dict.dim() / 2));
            break;
        }
        case DictionaryKind::PiecewisePoly:
            out.emplace_back("cell_indicator", ModelFunction::basis(dict, 0));
            out.emplace_back("cell_top_legendre", ModelFunction::basis(dict, dict.degree()));
            break;
    }
    return out;
}

SmallBallEstimate estimate_beta0(const Dictionary& dict, double kappa0,
                                 const Beta0Options& options) {
    if (!(kappa0 > 0.0 && kappa0 < 1.0)) throw ParameterError("kappa0 must lie in (0, 1)");
    if (!options.adversarial_only && options.random_directions < 1) {
        throw ParameterError("at least one random direction is required");
    }
    SmallBallEstimate est;
    est.kappa0 = kappa0;
    est.kind = dict.kind();
    est.dim = dict.dim();
    est.beta0_lower = paley_zygmund_lower(dict, kappa0);

    auto consider = [&](const std::string& tag, const ModelFunction& f) {
        const double p = smallball_probability(f, kappa0);
        ++est.probed_directions;
        if (!est.worst_direction || p < est.beta0_upper) {
            est.beta0_upper = p;
            est.worst_direction = f;
            est.worst_tag = tag;
        }
    };

    if (!options.adversarial_only) {
        for (int i = 0; i < dict.dim(); ++i) {
            consider("basis_" + std::to_string(i), ModelFunction::basis(dict, i));
        }
    }
    for (const auto& [tag, f] : adversarial_directions(dict)) consider(tag, f);
    if (!options.adversarial_only) {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> gauss;
        for (int r = 0; r < options.random_directions; ++r) {
            Eigen::VectorXd c(dict.dim());
            for (auto& v : c) v = gauss(rng);
            const double norm = c.norm();
            if (norm == 0.0) continue;
            consider("random_" + std::to_string(r), ModelFunction(dict, c / norm));
        }
    }
    if (!est.worst_direction) {
        consider("basis_0", ModelFunction::basis(dict, 0));
    }
    return est;
}

double fejer_smallball_bound(int l, double kappa0) {
    const FejerKernel kernel(l);
    return 1.0 / std::sqrt(kappa0 * std::sqrt(kernel.l2_norm_squared()) * (l + 1.0));
}

double fourier_beta0_asymptote(int dim, double kappa0) {
    return std::pow(3.0, 0.25) * std::numbers::sqrt2 / std::sqrt(kappa0) * std::pow(dim, -0.75);
}

bool SmallBallCaps::universal_checks(double beta0, double kappa0) const {
    const bool product = beta0 * kappa0 * kappa0 <= 1.0 + 1e-12;
    return product && (!constants_in_model || kappa0 <= 1.0 + 1e-12);
}

SmallBallCaps prop1_upper_bounds(const Dictionary& dict, const std::vector<ModelFunction>& probes,
                               std::span<const double> q_list) {
    if (probes.empty()) throw ParameterError("probe set must not be empty");
    SmallBallCaps r;
    r.constants_in_model = dict.contains_constants();
    r.kappa0_cap = std::numeric_limits<double>::infinity();
    for (double q : q_list) r.moment_caps[q] = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const ModelFunction& f = probes[i];
        if (f.is_zero()) {
            r.warnings.push_back("probe " + std::to_string(i) + " is the zero function; skipped");
            continue;
        }
        ++r.used_probes;
        const double l2 = f.coeffs().norm();
        r.beta0_cap = std::min(r.beta0_cap, support_measure(f));
        r.kappa0_cap = std::min(r.kappa0_cap, sup_norm(f) / l2);
        for (double q : q_list) {
            const double ratio = q == 2.0 ? 1.0 : lq_norm(f, q) / l2;
            r.moment_caps[q] = std::min(r.moment_caps[q], std::pow(ratio, q));
        }
    }
    if (r.used_probes == 0) throw ParameterError("probe set contains only zero functions");
    return r;
}

double zeta_series(double s) {
    if (!(s > 1.0)) throw ParameterError("series sum k^-s diverges for s <= 1");
    constexpr int n = 1000;
    double partial = 0.0;
    for (int k = n - 1; k >= 1; --k) partial += std::pow(k, -s);
    const double big_n = n;
    // Euler-Maclaurin tail for k >= n
    const double tail = std::pow(big_n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big_n, -s) +
                        s * std::pow(big_n, -s - 1.0) / 12.0 -
                        s * (s + 1.0) * (s + 2.0) * std::pow(big_n, -s - 3.0) / 720.0;
    return partial + tail;
}

double lambda_constant(double nu) {
    if (!(nu > 0.5)) throw ParameterError("C_nu diverges for nu <= 1/2");
    return zeta_series(2.0 * nu);
}

double lambda_norm(const Eigen::VectorXd& coeffs, double nu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        s += std::pow(static_cast<double>(i + 1), nu) * std::abs(coeffs[i]);
    }
    return s;
}

double lambda_norm(const ModelFunction& f, double nu) {
    if (f.dictionary().kind() != DictionaryKind::Fourier) {
        throw UnsupportedError("weighted-l1 norm requires a Fourier dictionary");
    }
    return lambda_norm(f.coeffs(), nu);
}

LambdaMembership lambda_membership(const ModelFunction& f, const LambdaClass& cls) {
    LambdaMembership m;
    m.lambda_norm = lambda_norm(f, cls.nu);
    m.sup = sup_norm(f);
    m.norm_margin = cls.L1 - m.lambda_norm;
    m.sup_margin = m.sup - cls.L2;
    m.member = m.norm_margin >= 0.0 && m.sup_margin >= 0.0 && !f.is_zero();
    return m;
}

double prop4_smallball_lower(const LambdaClass& cls, double kappa0) {
    if (!(kappa0 > 0.0 && kappa0 < 1.0)) throw ParameterError("kappa0 must lie in (0, 1)");
    const double c_nu = lambda_constant(cls.nu);
    return cls.L2 * cls.L2 * (1.0 - kappa0 * kappa0) /
           (4.0 * c_nu * c_nu * std::pow(cls.L1, 4));
}

SobolevCheck sobolev_inclusion_check(double gamma, double Q, double nu, double L1) {
    if (!(gamma > nu + 0.5)) throw ParameterError("inclusion requires gamma > nu + 1/2");
    if (Q < 0.0) throw ParameterError("Sobolev radius must be nonnegative");
    SobolevCheck c;
    c.q_threshold = L1 * L1 / zeta_series(2.0 * (gamma - nu));
    c.included = Q <= c.q_threshold;
    return c;
}

Eigen::VectorXd sample_sobolev_member(double gamma, double Q, int dim, std::mt19937_64& rng,
                                      std::optional<double> extremal_nu) {
    if (dim < 1) throw ParameterError("dimension must be positive");
    Eigen::VectorXd c(dim);
    if (extremal_nu) {
        for (int i = 0; i < dim; ++i) c[i] = std::pow(i + 1.0, *extremal_nu - 2.0 * gamma);
    } else {
        std::normal_distribution<double> gauss;
        for (int i = 0; i < dim; ++i) c[i] = gauss(rng) * std::pow(i + 1.0, -gamma);
    }
    double energy = 0.0;
    for (int i = 0; i < dim; ++i) energy += std::pow(i + 1.0, 2.0 * gamma) * c[i] * c[i];
    if (energy == 0.0) return c;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double radius = extremal_nu ? Q : Q * unif(rng);
    return c * std::sqrt(radius / energy);
}

std::optional<ModelFunction> sample_lambda_member(const Dictionary& dict, const LambdaClass& cls,
                                                  std::mt19937_64& rng, int max_tries) {
    if (dict.kind() != DictionaryKind::Fourier) {
        throw UnsupportedError("weighted-l1 classes are defined for Fourier dictionaries");
    }
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.5, 1.0);
    for (int t = 0; t < max_tries; ++t) {
        Eigen::VectorXd c(dict.dim());
        for (int i = 0; i < dict.dim(); ++i) c[i] = gauss(rng) * std::pow(i + 1.0, -cls.nu - 1.0);
        const double norm = lambda_norm(c, cls.nu);
        if (norm == 0.0) continue;
        c *= cls.L1 * unif(rng) / norm;
        ModelFunction f(dict, std::move(c));
        if (sup_norm(f) >= cls.L2) return f;
    }
    return std::nullopt;
}

}  // namespace linagg
