#include "linagg/erm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "linagg/bounds.hpp"
#include "linagg/quadrature.hpp"
#include "linagg/smallball.hpp"

namespace linagg {

std::string to_string(NoiseLaw law) {
    switch (law) {
        case NoiseLaw::Gaussian: return "gaussian";
        case NoiseLaw::BoundedUniform: return "uniform";
        case NoiseLaw::Rademacher: return "rademacher";
        case NoiseLaw::StudentT: return "student_t";
    }
    return "unknown";
}

NoiseLaw parse_noise_law(const std::string& name) {
    if (name == "gaussian") return NoiseLaw::Gaussian;
    if (name == "uniform") return NoiseLaw::BoundedUniform;
    if (name == "rademacher") return NoiseLaw::Rademacher;
    if (name == "student_t") return NoiseLaw::StudentT;
    throw ParameterError("unknown noise law '" + name +
                         "' (expected gaussian, uniform, rademacher or student_t)");
}

std::string to_string(PiecewiseShape shape) {
    switch (shape) {
        case PiecewiseShape::Step: return "step";
        case PiecewiseShape::Tent: return "tent";
        case PiecewiseShape::Sawtooth: return "sawtooth";
    }
    return "unknown";
}

PiecewiseShape parse_piecewise_shape(const std::string& name) {
    if (name == "step") return PiecewiseShape::Step;
    if (name == "tent") return PiecewiseShape::Tent;
    if (name == "sawtooth") return PiecewiseShape::Sawtooth;
    throw ParameterError("unknown piecewise shape '" + name + "' (expected step, tent or sawtooth)");
}

RegressionProblem::RegressionProblem(Dictionary dict, Target target, NoiseLevel level,
                                     NoiseSpec noise)
    : dict_(std::move(dict)), target_(std::move(target)), level_(level), noise_(noise) {
    if (!(level_.sigma0 >= 0.0)) throw ParameterError("noise level sigma0 must be nonnegative");
    if (noise_.law == NoiseLaw::StudentT && !(noise_.dof > 2.0)) {
        throw ParameterError("Student-T degrees of freedom must exceed 2");
    }
    if (const auto* t = std::get_if<InModelTarget>(&target_)) {
        if (t->coeffs.size() != dict_.dim()) {
            throw ParameterError("in-model target needs " + std::to_string(dict_.dim()) +
                                 " coefficients, got " + std::to_string(t->coeffs.size()));
        }
    } else if (const auto* t = std::get_if<FourierSeriesTarget>(&target_)) {
        if (t->truncation < 1) throw ParameterError("Fourier-series truncation must be positive");
        const int dim = t->truncation % 2 == 1 ? t->truncation : t->truncation + 1;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
        for (int k = 0; k < t->truncation; ++k) c[k] = t->amplitude * std::pow(k + 1.0, -t->decay);
        series_.emplace(Dictionary::fourier(dim), std::move(c));
    }
}

RegressionProblem RegressionProblem::with_dictionary(Dictionary dict) const {
    return {std::move(dict), target_, level_, noise_};
}

namespace {

double angle_of(const Domain& domain, double x) {
    return domain.is_periodic_2pi() ? x : 2.0 * std::numbers::pi * domain.to_unit(x);
}

}  // namespace

double RegressionProblem::target_value(double x) const {
    if (const auto* t = std::get_if<InModelTarget>(&target_)) {
        thread_local std::vector<double> phi;
        phi.resize(dict_.dim());
        dict_.evaluate_all_unchecked(x, phi);
        return Eigen::Map<const Eigen::VectorXd>(phi.data(), dict_.dim()).dot(t->coeffs);
    }
    if (series_) return series_->value_unchecked(angle_of(dict_.domain(), x));
    const auto& t = std::get<PiecewiseSmoothTarget>(target_);
    const double u = dict_.domain().to_unit(x);
    switch (t.shape) {
        case PiecewiseShape::Step: return t.amplitude * (u >= 0.5 ? 1.0 : -1.0);
        case PiecewiseShape::Tent: return t.amplitude * (1.0 - 2.0 * std::abs(u - 0.5));
        case PiecewiseShape::Sawtooth: {
            const double v = 2.0 * u;
            return t.amplitude * (2.0 * (v - std::floor(v)) - 1.0);
        }
    }
    return 0.0;
}

double RegressionProblem::sigma(double x) const {
    if (level_.kind == NoiseLevelKind::Constant) return level_.sigma0;
    const double c = std::cos(angle_of(dict_.domain(), x));
    return level_.sigma0 * std::sqrt((1.0 + c * c) / 1.5);
}

double RegressionProblem::noise_bound() const {
    switch (noise_.law) {
        case NoiseLaw::BoundedUniform: return std::sqrt(3.0);
        case NoiseLaw::Rademacher: return 1.0;
        default: return std::numeric_limits<double>::infinity();
    }
}

std::vector<double> RegressionProblem::target_breaks() const {
    if (std::holds_alternative<PiecewiseSmoothTarget>(target_)) {
        const auto& t = std::get<PiecewiseSmoothTarget>(target_);
        const Domain& d = dict_.domain();
        std::vector<double> out{d.from_unit(0.5)};
        if (t.shape == PiecewiseShape::Sawtooth) {
            out.insert(out.begin(), d.from_unit(0.0));
        }
        return out;
    }
    return {};
}

std::string Dataset::to_csv() const {
    std::string out = "x,y\n";
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[i], y[i]);
        out += buf;
    }
    return out;
}

Dataset sample(const RegressionProblem& problem, int n, std::uint64_t seed) {
    if (n < 1) throw ParameterError("sample size must be at least 1");
    std::mt19937_64 rng(seed);
    const Domain& d = problem.dictionary().domain();
    std::uniform_real_distribution<double> design(d.lower(), d.upper());
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(-std::sqrt(3.0), std::sqrt(3.0));
    std::bernoulli_distribution coin(0.5);
    const double dof = problem.noise().dof;
    std::student_t_distribution<double> student(dof);
    const double t_scale = std::sqrt((dof - 2.0) / dof);

    Dataset data;
    data.x.resize(n);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = design(rng);
        double eps = 0.0;
        switch (problem.noise().law) {
            case NoiseLaw::Gaussian: eps = gauss(rng); break;
            case NoiseLaw::BoundedUniform: eps = unif(rng); break;
            case NoiseLaw::Rademacher: eps = coin(rng) ? 1.0 : -1.0; break;
            case NoiseLaw::StudentT: eps = student(rng) * t_scale; break;
        }
        data.x[i] = x;
        data.y[i] = problem.target_value(x) + problem.sigma(x) * eps;
    }
    return data;
}

namespace {

std::vector<double> quadrature_edges(const RegressionProblem& problem) {
    auto edges = problem.dictionary().breakpoints();
    for (double b : problem.target_breaks()) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

QuadraturePolicy segment_policy(const Dictionary& dict, std::size_t segments) {
    QuadraturePolicy policy;
    policy.initial_panels =
        std::max(1, static_cast<int>(16 * static_cast<std::size_t>(dict.dim()) / segments));
    return policy;
}

}  // namespace

Projection project_target(const RegressionProblem& problem) {
    const Dictionary& dict = problem.dictionary();
    const int dim = dict.dim();
    const double length = dict.domain().length();
    Projection p;
    p.oracle.sigma_sq_mean = problem.sigma_sq_mean();

    const auto edges = quadrature_edges(problem);
    const auto policy = segment_policy(dict, edges.size() - 1);
    const auto* series = std::get_if<FourierSeriesTarget>(&problem.target());

    bool exact_approx = false;
    if (const auto* t = std::get_if<InModelTarget>(&problem.target())) {
        p.beta_m = t->coeffs;
        p.oracle.approx_err_sq = 0.0;
        exact_approx = true;
    } else if (series && dict.kind() == DictionaryKind::Fourier) {
        p.beta_m = Eigen::VectorXd::Zero(dim);
        double tail = 0.0;
        for (int k = 0; k < series->truncation; ++k) {
            const double b = series->amplitude * std::pow(k + 1.0, -series->decay);
            if (k < dim) {
                p.beta_m[k] = b;
            } else {
                tail += b * b;
            }
        }
        p.oracle.approx_err_sq = tail;
        exact_approx = true;
    } else {
        p.beta_m = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd phi(dim);
        auto integrand = [&](double x) -> Eigen::VectorXd {
            dict.evaluate_all_unchecked(x, std::span(phi.data(), dim));
            return problem.target_value(x) * phi;
        };
        for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
            p.beta_m += integrate_or_throw(integrand, edges[s], edges[s + 1], policy,
                                           "projection coefficients")
                            .value;
        }
        p.beta_m /= length;
    }

    const ModelFunction s_m(dict, p.beta_m);
    const bool in_model = std::holds_alternative<InModelTarget>(problem.target());
    auto residual_sq = [&](double x) {
        if (in_model) return 0.0;
        const double r = problem.target_value(x) - s_m.value_unchecked(x);
        return r * r;
    };
    if (!exact_approx) {
        double total = 0.0;
        for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
            total += integrate_or_throw(residual_sq, edges[s], edges[s + 1], policy,
                                       "approximation error")
                         .value;
        }
        p.oracle.approx_err_sq = total / length;
    }
    p.oracle.Cm_sq = p.oracle.sigma_sq_mean + p.oracle.approx_err_sq;

    Eigen::VectorXd phi(dim);
    auto var_integrand = [&](double x) {
        dict.evaluate_all_unchecked(x, std::span(phi.data(), dim));
        const double s = problem.sigma(x);
        return (residual_sq(x) + s * s) * phi.squaredNorm();
    };
    double var_total = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        var_total += integrate_or_throw(var_integrand, edges[s], edges[s + 1], policy,
                                        "variance form of C_m^2")
                         .value;
    }
    p.oracle.Cm_sq_varform = var_total / (length * dim);
    return p;
}

FitError::FitError(double min_eigenvalue, double opnorm)
    : NumericError("empirical Gram matrix is singular (min eigenvalue " +
                   std::to_string(min_eigenvalue) + ", ||A_{n,D}|| = " + std::to_string(opnorm) +
                   ")"),
      min_eigenvalue_(min_eigenvalue),
      opnorm_(opnorm) {}

GramSolve solve_gram_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& E) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    GramSolve out;
    out.opnorm = std::max(std::abs(lambda.minCoeff()), std::abs(lambda.maxCoeff()));
    out.min_eigenvalue = 1.0 + lambda.minCoeff();
    out.solved = out.min_eigenvalue >= kSingularityThreshold;
    if (out.solved) {
        const Eigen::VectorXd shifted = (lambda.array() + 1.0).matrix();
        const Eigen::VectorXd proj = eig.eigenvectors().transpose() * E;
        out.beta = eig.eigenvectors() * proj.cwiseQuotient(shifted);
    } else {
        out.beta = Eigen::VectorXd::Constant(E.size(), std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

Eigen::MatrixXd design_matrix(const Dictionary& dict, std::span<const double> x) {
    const int dim = dict.dim();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi(
        static_cast<Eigen::Index>(x.size()), dim);
    for (std::size_t i = 0; i < x.size(); ++i) {
        dict.evaluate_all(x[i], std::span(phi.row(static_cast<Eigen::Index>(i)).data(), dim));
    }
    return phi;
}

ErmFit try_fit(const Dictionary& dict, const Dataset& data, const Eigen::VectorXd& beta_m,
               const FitOptions& options) {
    if (data.size() < 1) throw ParameterError("dataset is empty");
    if (beta_m.size() != dict.dim()) throw ParameterError("projection has the wrong dimension");
    const int dim = dict.dim();
    const double n = static_cast<double>(data.size());
    const Eigen::MatrixXd phi = design_matrix(dict, data.x);
    const Eigen::Map<const Eigen::VectorXd> y(data.y.data(), static_cast<Eigen::Index>(data.size()));

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose(), 1.0 / n);
    Eigen::MatrixXd A = gram.selfadjointView<Eigen::Lower>();
    A.diagonal().array() -= 1.0;
    Eigen::VectorXd E = phi.transpose() * y / n;
    Eigen::VectorXd F = phi.transpose() * (y - phi * beta_m) / n;

    const GramSolve solve = solve_gram_system(A, E);
    ErmFit out;
    out.n = static_cast<int>(data.size());
    out.beta_hat = solve.beta;
    out.beta_m = beta_m;
    out.solved = solve.solved;
    out.min_eigenvalue = solve.min_eigenvalue;
    out.gram_perturbation_opnorm = solve.opnorm;
    out.F_norm_sq = F.squaredNorm();
    out.excess_risk = solve.solved ? (solve.beta - beta_m).squaredNorm()
                                   : std::numeric_limits<double>::infinity();
    if (options.nu) out.lambda_opnorm = lambda_opnorm(A, *options.nu);
    if (options.keep_matrices) {
        out.A = std::move(A);
        out.E = std::move(E);
        out.F = std::move(F);
    }
    return out;
}

ErmFit fit(const Dictionary& dict, const Dataset& data, const Eigen::VectorXd& beta_m,
           const FitOptions& options) {
    ErmFit f = try_fit(dict, data, beta_m, options);
    if (!f.solved) throw FitError(f.min_eigenvalue, f.gram_perturbation_opnorm);
    return f;
}

ErmFit fit(const RegressionProblem& problem, const Dataset& data, const FitOptions& options) {
    return fit(problem.dictionary(), data, project_target(problem).beta_m, options);
}

ErmFit population_fit(const RegressionProblem& problem) {
    const Projection p = project_target(problem);
    const int dim = problem.dictionary().dim();
    ErmFit out;
    out.n = 0;
    out.A = Eigen::MatrixXd::Zero(dim, dim);
    out.E = p.beta_m;
    out.F = Eigen::VectorXd::Zero(dim);
    const GramSolve solve = solve_gram_system(out.A, out.E);
    out.beta_hat = solve.beta;
    out.beta_m = p.beta_m;
    out.solved = solve.solved;
    out.min_eigenvalue = solve.min_eigenvalue;
    out.gram_perturbation_opnorm = solve.opnorm;
    out.excess_risk = (out.beta_hat - out.beta_m).squaredNorm();
    return out;
}

OpnormCheck gram_opnorm_identity_check(const Eigen::MatrixXd& A, int n_probe,
                                       std::uint64_t seed) {
    OpnormCheck c;
    const int dim = static_cast<int>(A.rows());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Eigen::Index top = std::abs(lambda[0]) >= std::abs(lambda[dim - 1]) ? 0 : dim - 1;
    c.opnorm = std::abs(lambda[top]);
    const Eigen::VectorXd v = eig.eigenvectors().col(top);
    c.singular_pair = std::abs(v.dot(A * v));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int p = 0; p < n_probe; ++p) {
        Eigen::VectorXd s(dim);
        Eigen::VectorXd t(dim);
        for (auto& e : s) e = gauss(rng);
        for (auto& e : t) e = gauss(rng);
        if (s.norm() == 0.0 || t.norm() == 0.0) continue;
        s.normalize();
        t.normalize();
        c.probe_sup = std::max(c.probe_sup, std::abs(s.dot(A * t)));
    }
    c.consistent = c.probe_sup <= c.opnorm + 1e-9 && std::abs(c.singular_pair - c.opnorm) <= 1e-9;
    return c;
}

OpnormCheck gram_opnorm_identity_check(const Dataset& data, const Dictionary& dict, int n_probe,
                                       std::uint64_t seed) {
    const Eigen::MatrixXd phi = design_matrix(dict, data.x);
    Eigen::MatrixXd A = phi.transpose() * phi / static_cast<double>(data.size());
    A.diagonal().array() -= 1.0;
    return gram_opnorm_identity_check(A, n_probe, seed);
}

double lambda_opnorm(const Eigen::MatrixXd& A, double nu) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < A.rows(); ++k) {
        double row_max = 0.0;
        for (Eigen::Index l = 0; l < A.cols(); ++l) {
            row_max = std::max(row_max, std::abs(A(k, l)) / std::pow(l + 1.0, nu));
        }
        total += std::pow(k + 1.0, nu) * row_max;
    }
    return total;
}

double lambda_induced_norm(const Eigen::MatrixXd& A, double nu) {
    double best = 0.0;
    for (Eigen::Index l = 0; l < A.cols(); ++l) {
        double col = 0.0;
        for (Eigen::Index k = 0; k < A.rows(); ++k) col += std::pow(k + 1.0, nu) * std::abs(A(k, l));
        best = std::max(best, col / std::pow(l + 1.0, nu));
    }
    return best;
}

RegularityReport estimator_regularity(const ErmFit& fit, const Dictionary& dict,
                                      const LambdaClass& cls, double sigma, double z) {
    if (dict.kind() != DictionaryKind::Fourier) {
        throw UnsupportedError("estimator regularity is defined for Fourier dictionaries");
    }
    if (!fit.solved) throw ParameterError("estimator regularity needs a solved fit");
    RegularityReport r;
    const LambdaClass relaxed{cls.nu, 2.0 * cls.L1, cls.L2 / 4.0};
    const LambdaMembership m = lambda_membership(ModelFunction(dict, fit.beta_hat), relaxed);
    r.member = m.member;
    r.lambda_norm = m.lambda_norm;
    r.sup = m.sup;
    r.norm_margin = m.norm_margin;
    r.sup_margin = m.sup_margin;

    r.A_lambda = fit.lambda_opnorm ? *fit.lambda_opnorm : lambda_opnorm(fit.A, cls.nu);
    r.A_threshold = lemma3_envelope(dict.dim(), fit.n, cls.nu);
    r.F_lambda = lambda_norm(fit.F, cls.nu);
    r.F_threshold = lambda_F_threshold(dict.dim(), fit.n, cls.nu, sigma, z);
    r.event = r.A_lambda <= r.A_threshold && r.A_threshold <= 0.5 && r.F_lambda <= r.F_threshold;
    return r;
}

}  // namespace linagg
