#include "linagg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "linagg/bounds.hpp"
#include "linagg/fejer.hpp"
#include "linagg/quadrature.hpp"

namespace linagg {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
    const std::size_t threads =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

RegressionProblem problem_at(const RegressionProblem& problem, int D) {
    if (problem.dictionary().dim() == D) return problem;
    Dictionary dict = with_dimension(problem.dictionary(), D);
    if (const auto* t = std::get_if<InModelTarget>(&problem.target())) {
        if (t->coeffs.size() > D) {
            throw ParameterError("in-model target has more coefficients than D = " +
                                 std::to_string(D));
        }
        Eigen::VectorXd c = Eigen::VectorXd::Zero(D);
        c.head(t->coeffs.size()) = t->coeffs;
        return {std::move(dict), InModelTarget{std::move(c)}, problem.noise_level(),
                problem.noise()};
    }
    return problem.with_dictionary(std::move(dict));
}

ExperimentReport run_replicates(const Campaign& campaign) {
    if (campaign.replicates < 1) throw ParameterError("replicates must be at least 1");
    if (campaign.grid.empty()) throw ParameterError("campaign grid is empty");
    ExperimentReport report;
    report.campaign = campaign.name;
    report.master_seed = campaign.master_seed;
    report.replicates = campaign.replicates;

    std::vector<RegressionProblem> problems;
    std::vector<Eigen::VectorXd> projections;
    for (std::size_t g = 0; g < campaign.grid.size(); ++g) {
        const GridPoint& pt = campaign.grid[g];
        if (pt.n < 1) throw ParameterError("grid sample sizes must be positive");
        if (pt.n < pt.D) {
            report.notes.push_back("grid point " + std::to_string(g) + " has n < D; fits may be unsolved");
        }
        problems.push_back(problem_at(campaign.problem, pt.D));
        const Projection p = project_target(problems.back());
        projections.push_back(p.beta_m);
        report.oracles.push_back({pt, p.oracle, pt.D * p.oracle.Cm_sq / static_cast<double>(pt.n)});
    }

    const std::size_t reps = static_cast<std::size_t>(campaign.replicates);
    report.records.resize(campaign.grid.size() * reps);
    FitOptions options;
    options.nu = campaign.nu;
    options.keep_matrices = false;
    parallel_for(report.records.size(), campaign.workers, [&](std::size_t task) {
        const std::size_t g = task / reps;
        const std::size_t r = task % reps;
        const GridPoint& pt = campaign.grid[g];
        ReplicateRecord rec;
        rec.grid_index = static_cast<int>(g);
        rec.replicate = static_cast<int>(r);
        rec.seed = derive_seed(campaign.master_seed, g, r);
        rec.n = pt.n;
        rec.D = pt.D;
        const Dataset data = sample(problems[g], static_cast<int>(pt.n), rec.seed);
        const ErmFit f = try_fit(problems[g].dictionary(), data, projections[g], options);
        rec.solved = f.solved;
        rec.excess_risk = f.excess_risk;
        rec.opnorm = f.gram_perturbation_opnorm;
        rec.lambda_opnorm = f.lambda_opnorm.value_or(std::numeric_limits<double>::quiet_NaN());
        rec.F_norm_sq = f.F_norm_sq;
        report.records[task] = rec;
    });
    return report;
}

std::vector<GridSummary> summarize(const std::vector<ReplicateRecord>& records,
                                   const std::vector<GridOracle>& oracles,
                                   const std::vector<double>& epsilon_grid) {
    std::vector<GridSummary> out;
    for (std::size_t g = 0; g < oracles.size(); ++g) {
        GridSummary s;
        s.point = oracles[g].point;
        s.center = oracles[g].center;
        std::vector<double> risk;
        std::vector<double> fsq;
        std::vector<double> op;
        std::vector<double> lop;
        for (const auto& r : records) {
            if (r.grid_index != static_cast<int>(g)) continue;
            fsq.push_back(r.F_norm_sq);
            op.push_back(r.opnorm);
            if (std::isfinite(r.lambda_opnorm)) lop.push_back(r.lambda_opnorm);
            if (r.solved) {
                ++s.solved;
                risk.push_back(r.excess_risk);
            } else {
                ++s.unsolved;
            }
        }
        if (!risk.empty()) {
            s.mean = mean(risk);
            s.median = median(risk);
            s.q05 = quantile(risk, 0.05);
            s.q95 = quantile(risk, 0.95);
            if (s.center > 0.0) {
                s.mean_ratio = s.mean / s.center;
                s.median_ratio = s.median / s.center;
            }
            s.half_width = s.median > 0.0 ? (s.q95 - s.q05) / (2.0 * s.median) : 0.0;
        }
        if (!fsq.empty()) {
            s.mean_F_norm_sq = mean(fsq);
            s.median_opnorm = median(op);
        }
        s.median_lambda_opnorm = lop.empty() ? 0.0 : median(lop);
        const std::size_t total = static_cast<std::size_t>(s.solved + s.unsolved);
        for (double eps : epsilon_grid) {
            const double lo = (1.0 - eps) * s.center;
            const double hi = (1.0 + eps) * s.center;
            std::size_t inside = 0;
            for (double v : risk) inside += (v >= lo && v <= hi) ? 1 : 0;
            s.coverage.push_back(total == 0 ? 0.0
                                            : static_cast<double>(inside) / static_cast<double>(total));
        }
        out.push_back(std::move(s));
    }
    return out;
}

ExperimentReport run_concentration_campaign(const Campaign& campaign,
                                            const std::vector<double>& epsilon_grid) {
    for (double eps : epsilon_grid) {
        if (!(eps >= 0.0)) throw ParameterError("epsilon values must be nonnegative");
    }
    ExperimentReport report = run_replicates(campaign);
    report.epsilon_grid = epsilon_grid;
    std::sort(report.epsilon_grid.begin(), report.epsilon_grid.end());
    report.summaries = summarize(report.records, report.oracles, report.epsilon_grid);
    const double bound = campaign.problem.noise_bound();
    if (!std::isfinite(bound)) {
        report.notes.push_back("noise law is unbounded; the boundedness hypothesis does not hold");
    }
    for (const auto& o : report.oracles) {
        const Interval iv = theorem2_interval(o.oracle.Cm_sq, o.point.D, o.point.n, 0.0);
        if (!iv.in_dimension_window) {
            report.notes.push_back("n=" + std::to_string(o.point.n) + ", D=" +
                                   std::to_string(o.point.D) +
                                   " lies outside the dimension window with A_-=A_+=1");
        }
    }
    return report;
}

namespace {

bool spans_decade(const std::vector<int>& dims) {
    if (dims.empty()) return false;
    const auto [lo, hi] = std::minmax_element(dims.begin(), dims.end());
    return *hi >= 10 * *lo;
}

}  // namespace

RateSweepReport run_rate_sweep(const Campaign& campaign, double kappa0, double x) {
    if (campaign.grid.size() < 3) throw ParameterError("rate sweep needs at least 3 grid points");
    RateSweepReport out;
    out.n = campaign.grid.front().n;
    for (const auto& pt : campaign.grid) {
        if (pt.n != out.n) throw ParameterError("rate sweep needs a single sample size");
        out.dims.push_back(pt.D);
    }
    if (!spans_decade(out.dims)) throw ParameterError("rate sweep dimensions must span a decade");
    out.kappa0 = kappa0;
    out.x = x;
    out.base = run_replicates(campaign);
    out.base.summaries = summarize(out.base.records, out.base.oracles, {});

    std::vector<double> dims_d(out.dims.begin(), out.dims.end());
    for (const auto& s : out.base.summaries) out.mean_excess.push_back(s.mean);
    out.measured = loglog_fit(dims_d, out.mean_excess);
    const double sigma0 = campaign.problem.noise_level().sigma0;
    if (sigma0 == 0.0 || out.measured.degenerate) {
        out.degenerate = true;
        out.base.notes.push_back("rate fit is degenerate (noiseless or vanishing excess risk)");
    }

    const bool fourier = campaign.problem.dictionary().kind() == DictionaryKind::Fourier;
    const double sigma = sigma0 > 0.0 ? sigma0 : 1.0;
    for (int D : out.dims) {
        BoundInputs b;
        b.kappa0 = 1.0;
        b.beta0 = fourier ? std::pow(D, -0.75) : 1.0 / D;
        b.sigma = sigma;
        b.D = D;
        b.n = out.n;
        b.x = x;
        out.corollary_envelope.push_back(theorem_A_bound(b).risk_bound);
        b.kappa0 = kappa0;
        b.beta0 = paley_zygmund_lower(with_dimension(campaign.problem.dictionary(), D), kappa0);
        out.measured_envelope.push_back(theorem_A_bound(b).risk_bound);
    }
    out.corollary_fit = loglog_fit(dims_d, out.corollary_envelope);
    out.measured_envelope_fit = loglog_fit(dims_d, out.measured_envelope);
    return out;
}

Beta0ScalingReport run_beta0_scaling(const Dictionary& family, const std::vector<int>& dims,
                                     double kappa0, const Beta0Options& options) {
    if (!spans_decade(dims)) throw ParameterError("beta0 scaling dimensions must span a decade");
    Beta0ScalingReport out;
    out.kind = family.kind();
    out.kappa0 = kappa0;
    std::vector<double> d;
    std::vector<double> up;
    std::vector<double> lo;
    std::vector<double> fej;
    for (int D : dims) {
        const Dictionary dict = with_dimension(family, D);
        Beta0Row row;
        row.estimate = estimate_beta0(dict, kappa0, options);
        if (dict.kind() == DictionaryKind::Fourier && dict.max_frequency() >= 1) {
            const int l = dict.max_frequency();
            const ModelFunction f = fejer_as_model_function(l, dict.domain());
            row.fejer_probability = smallball_probability(f, kappa0);
            row.fejer_bound = fejer_smallball_bound(l, kappa0);
            row.asymptote = fourier_beta0_asymptote(D, kappa0);
            fej.push_back(*row.fejer_probability);
        }
        d.push_back(D);
        up.push_back(row.estimate.beta0_upper);
        lo.push_back(row.estimate.beta0_lower);
        out.rows.push_back(std::move(row));
    }
    out.upper_fit = loglog_fit(d, up);
    out.lower_fit = loglog_fit(d, lo);
    if (fej.size() == d.size()) out.fejer_fit = loglog_fit(d, fej);
    return out;
}

OpnormScalingReport run_opnorm_scaling(const Campaign& campaign, double alpha,
                                       std::optional<double> u) {
    OpnormScalingReport out;
    out.alpha = alpha;
    out.nu = campaign.nu.value_or(1.0);
    Campaign c = campaign;
    c.nu = out.nu;
    out.base = run_replicates(c);
    out.base.summaries = summarize(out.base.records, out.base.oracles, {});

    std::map<int, std::vector<std::pair<double, double>>> by_D;
    std::map<long long, std::vector<std::pair<double, double>>> by_n;
    for (std::size_t g = 0; g < c.grid.size(); ++g) {
        const GridPoint pt = c.grid[g];
        const Dictionary dict = with_dimension(c.problem.dictionary(), pt.D);
        const double u_m = u ? *u : std::sqrt(sup_ratio_squared(dict) / pt.D);
        if (g == 0) out.u = u_m;
        OpnormRow row;
        row.point = pt;
        row.lemma1_envelope = lemma1_envelope(pt.D, pt.n, alpha, u_m);
        row.lemma3_envelope = lemma3_envelope(pt.D, pt.n, out.nu);
        row.expected_violations = std::pow(static_cast<double>(pt.n), -alpha) * c.replicates;
        for (const auto& r : out.base.records) {
            if (r.grid_index != static_cast<int>(g)) continue;
            if (r.opnorm > row.lemma1_envelope) ++row.lemma1_violations;
            row.max_lambda_ratio = std::max(row.max_lambda_ratio, r.lambda_opnorm / row.lemma3_envelope);
        }
        row.median_opnorm = out.base.summaries[g].median_opnorm;
        row.median_lambda_opnorm = out.base.summaries[g].median_lambda_opnorm;
        by_D[pt.D].emplace_back(static_cast<double>(pt.n), row.median_opnorm);
        by_n[pt.n].emplace_back(static_cast<double>(pt.D), row.median_opnorm);
        out.rows.push_back(row);
    }
    auto fit_pairs = [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& [a, b] : pts) {
            xs.push_back(a);
            ys.push_back(b);
        }
        return loglog_fit(xs, ys);
    };
    for (const auto& [D, pts] : by_D) {
        if (pts.size() >= 2) out.slope_vs_n.emplace_back(D, fit_pairs(pts));
    }
    for (const auto& [n, pts] : by_n) {
        if (pts.size() >= 2) out.slope_vs_D.emplace_back(n, fit_pairs(pts));
    }
    return out;
}

namespace {

std::vector<double> residual_edges(const RegressionProblem& problem) {
    auto edges = problem.dictionary().breakpoints();
    for (double b : problem.target_breaks()) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

double residual_sigma_sq(const RegressionProblem& problem, const Eigen::VectorXd& beta_m) {
    const Dictionary& dict = problem.dictionary();
    const int dim = dict.dim();
    const ModelFunction s_m(dict, beta_m);
    Eigen::VectorXd phi(dim);
    auto integrand = [&](double x) -> Eigen::MatrixXd {
        dict.evaluate_all_unchecked(x, std::span(phi.data(), dim));
        const double r = problem.target_value(x) - s_m.value_unchecked(x);
        const double s = problem.sigma(x);
        return (r * r + s * s) * (phi * phi.transpose());
    };
    const auto edges = residual_edges(problem);
    QuadraturePolicy policy;
    policy.initial_panels = std::max(1, static_cast<int>(16 * dim / (edges.size() - 1)));
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        second += integrate_or_throw(integrand, edges[s], edges[s + 1], policy,
                                     "residual second moment")
                      .value;
    }
    second /= dict.domain().length();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(second, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .maxCoeff();
}

double residual_envelope(const RegressionProblem& problem, const Eigen::VectorXd& beta_m) {
    const double eps_bound = problem.noise_bound();
    if (!std::isfinite(eps_bound)) return std::numeric_limits<double>::infinity();
    const Dictionary& dict = problem.dictionary();
    const ModelFunction s_m(dict, beta_m);
    const Domain& d = dict.domain();
    // sup |s* - s_m| + sup sigma * sup |eps| on a dense grid
    constexpr int points = 1 << 16;
    double sup_r = 0.0;
    double sup_s = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double x = d.from_unit(static_cast<double>(i) / points);
        sup_r = std::max(sup_r, std::abs(problem.target_value(x) - s_m.value_unchecked(x)));
        sup_s = std::max(sup_s, problem.sigma(x));
    }
    return (sup_r + sup_s * eps_bound) * sup_ratio(dict);
}

TailCoverageReport run_tail_coverage(const Campaign& campaign, const std::vector<double>& x_grid) {
    if (campaign.grid.size() != 1) throw ParameterError("tail coverage uses a single grid point");
    if (!std::isfinite(campaign.problem.noise_bound())) {
        throw ParameterError("tail coverage needs a bounded noise law");
    }
    TailCoverageReport out;
    out.base = run_replicates(campaign);
    out.base.summaries = summarize(out.base.records, out.base.oracles, {});
    const GridPoint pt = campaign.grid.front();
    const RegressionProblem problem = problem_at(campaign.problem, pt.D);
    const Projection proj = project_target(problem);
    out.sigmaF_sq = residual_sigma_sq(problem, proj.beta_m);
    out.b = residual_envelope(problem, proj.beta_m);
    const double n = static_cast<double>(pt.n);
    out.epsilon = std::pow(n, -0.25) * std::sqrt(std::log(n));

    std::vector<double> norms;
    std::vector<double> norms_sq;
    for (const auto& r : out.base.records) {
        norms.push_back(std::sqrt(r.F_norm_sq));
        norms_sq.push_back(r.F_norm_sq);
    }
    out.mean_F = mean(norms);
    out.mean_F_sq = mean(norms_sq);
    out.predicted_F_sq = pt.D * proj.oracle.Cm_sq / n;
    out.moment_ratio = out.mean_F_sq / out.predicted_F_sq;
    out.moment_pass = std::abs(out.moment_ratio - 1.0) <= 0.05;

    out.pass = out.moment_pass;
    for (double x : x_grid) {
        TailRow row;
        row.x = x;
        const TailRadii radii =
            concentration_tail_bounds(out.sigmaF_sq, out.b, out.mean_F, pt.n, x, out.epsilon);
        row.bousquet_radius = radii.bousquet;
        row.klein_rio_radius = radii.klein_rio;
        std::size_t up = 0;
        std::size_t down = 0;
        for (double v : norms) {
            up += v - out.mean_F >= radii.bousquet ? 1 : 0;
            down += out.mean_F - v >= radii.klein_rio ? 1 : 0;
        }
        const double R = static_cast<double>(norms.size());
        row.upper_frequency = up / R;
        row.lower_frequency = down / R;
        const double target = std::exp(-x);
        row.allowed = target + 3.0 * binomial_se(target, norms.size());
        row.vacuous = row.allowed >= 1.0;
        row.pass = row.upper_frequency <= row.allowed && row.lower_frequency <= row.allowed;
        out.pass = out.pass && row.pass;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace linagg
