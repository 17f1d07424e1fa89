#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "linagg/erm.hpp"
#include "linagg/error.hpp"
#include "linagg/quadrature.hpp"
#include "linagg/smallball.hpp"
#include "linagg/stats.hpp"
#include "oracles.hpp"

using namespace linagg;

namespace {

RegressionProblem in_model(const Dictionary& d, const Eigen::VectorXd& c, double sigma,
                           NoiseLaw law = NoiseLaw::Gaussian) {
    return {d, InModelTarget{c}, {NoiseLevelKind::Constant, sigma}, {law, 2.5}};
}

}  // namespace

TEST_CASE("sample: noiseless in-model data is exact") {
    std::mt19937_64 rng(1);
    const auto d = Dictionary::fourier(7);
    const Eigen::VectorXd c = oracle::gaussian_vector(7, rng);
    const auto data = sample(in_model(d, c, 0.0), 500, 3);
    REQUIRE(data.size() == 500);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(d.domain().contains(data.x[i]));
        CHECK(data.y[i] == doctest::Approx(oracle::value(d, c, data.x[i])).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sample(in_model(d, c, 0.0), 0, 3), ParameterError);
}

TEST_CASE("sample: reproducible given the seed") {
    const auto p = in_model(Dictionary::histogram(4), Eigen::VectorXd::Ones(4), 1.0);
    const auto a = sample(p, 100, 42);
    const auto b = sample(p, 100, 42);
    const auto c = sample(p, 100, 43);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.x != c.x);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_csv().rfind("x,y\n", 0) == 0);
}

TEST_CASE("sample: standardized noise laws") {
    const auto d = Dictionary::fourier(1);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    SUBCASE("Gaussian mean within 4/sqrt(n)") {
        const int n = 1000000;
        const auto data = sample(in_model(d, zero, 1.0), n, 5);
        CHECK(std::abs(mean(data.y)) <= 4.0 / std::sqrt(static_cast<double>(n)));
        CHECK(variance(data.y) == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("bounded laws") {
        for (NoiseLaw law : {NoiseLaw::BoundedUniform, NoiseLaw::Rademacher}) {
            const auto p = in_model(d, zero, 2.0, law);
            const auto data = sample(p, 200000, 6);
            CHECK(variance(data.y) == doctest::Approx(4.0).epsilon(0.02));
            double sup = 0.0;
            for (double y : data.y) sup = std::max(sup, std::abs(y));
            CHECK(sup <= 2.0 * p.noise_bound() + 1e-12);
        }
        CHECK(std::isinf(in_model(d, zero, 1.0).noise_bound()));
    }
    SUBCASE("Student-T uses a median check") {
        const auto data = sample(in_model(d, zero, 1.0, NoiseLaw::StudentT), 200000, 7);
        CHECK(std::abs(median(data.y)) < 0.01);
        const double iqr = quantile(data.y, 0.75) - quantile(data.y, 0.25);
        CHECK(iqr > 0.3);
        CHECK(iqr < 1.35);
    }
    SUBCASE("Student-T needs dof > 2") {
        CHECK_THROWS_AS(RegressionProblem(d, InModelTarget{zero}, {}, {NoiseLaw::StudentT, 2.0}), ParameterError);
    }
}

TEST_CASE("noise level: heteroscedastic preset keeps E[sigma^2]") {
    const RegressionProblem p(Dictionary::fourier(3), FourierSeriesTarget{}, {NoiseLevelKind::Heteroscedastic, 1.7});
    const auto r = integrate([&](double x) { return p.sigma(x) * p.sigma(x); }, 0.0, 2 * oracle::pi);
    CHECK(r.value / (2 * oracle::pi) == doctest::Approx(1.7 * 1.7).epsilon(1e-10));
    CHECK(p.sigma_sq_mean() == doctest::Approx(1.7 * 1.7));
}

TEST_CASE("project_target: examples") {
    SUBCASE("in model") {
        const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(5, -1, 1);
        const auto pr = project_target(in_model(Dictionary::fourier(5), c, 0.7));
        CHECK(pr.beta_m.isApprox(c));
        CHECK(pr.oracle.approx_err_sq == doctest::Approx(0.0));
        CHECK(pr.oracle.sigma_sq_mean == doctest::Approx(0.49));
        CHECK(pr.oracle.Cm_sq == doctest::Approx(0.49));
    }
    SUBCASE("Fourier series tail") {
        const RegressionProblem p(Dictionary::fourier(5), FourierSeriesTarget{2.0, 1.0, 201}, {NoiseLevelKind::Constant, 1.0});
        const auto pr = project_target(p);
        double tail = 0.0;
        for (int k = 6; k <= 201; ++k) tail += std::pow(k, -4.0);
        CHECK(pr.oracle.approx_err_sq == doctest::Approx(tail).epsilon(1e-12));
        for (int k = 1; k <= 5; ++k) CHECK(pr.beta_m[k - 1] == doctest::Approx(std::pow(k, -2.0)));
        CHECK(pr.oracle.Cm_sq == doctest::Approx(1.0 + tail));
    }
    SUBCASE("piecewise target by quadrature") {
        const RegressionProblem p(Dictionary::histogram(4), PiecewiseSmoothTarget{PiecewiseShape::Tent, 1.0},
                                  {NoiseLevelKind::Constant, 0.0});
        const auto pr = project_target(p);
        // tent 1 - 2|u - 1/2| has cell means 1/4, 3/4, 3/4, 1/4; coefficient = mean / sqrt(D)
        CHECK(pr.beta_m[0] == doctest::Approx(0.25 / 2.0).epsilon(1e-10));
        CHECK(pr.beta_m[1] == doctest::Approx(0.75 / 2.0).epsilon(1e-10));
        // ||tent||^2 = 1/3, minus the projection energy
        CHECK(pr.oracle.approx_err_sq == doctest::Approx(1.0 / 3.0 - pr.beta_m.squaredNorm()).epsilon(1e-10));
    }
    SUBCASE("piecewise target reproduced by the model") {
        for (auto shape : {PiecewiseShape::Step, PiecewiseShape::Tent, PiecewiseShape::Sawtooth}) {
            const RegressionProblem p(Dictionary::piecewise_poly(6, 1), PiecewiseSmoothTarget{shape, 1.0},
                                      {NoiseLevelKind::Constant, 0.5});
            const auto pr = project_target(p);
            CHECK(pr.oracle.approx_err_sq < 1e-14);
            CHECK(pr.oracle.Cm_sq == doctest::Approx(0.25));
        }
    }
}

TEST_CASE("project_target: C_m^2 agrees with its variance form") {
    for (auto noise_level : {NoiseLevelKind::Constant, NoiseLevelKind::Heteroscedastic}) {
        const RegressionProblem p(Dictionary::fourier(9), FourierSeriesTarget{1.5, 0.8, 61}, {noise_level, 0.6},
                                  {NoiseLaw::BoundedUniform, 2.5});
        const auto pr = project_target(p);
        CHECK(pr.oracle.Cm_sq == doctest::Approx(pr.oracle.sigma_sq_mean + pr.oracle.approx_err_sq));
        CHECK(pr.oracle.Cm_sq_varform == doctest::Approx(pr.oracle.Cm_sq).epsilon(1e-8));
    }
}

TEST_CASE("fit: noiseless in-model recovery") {
    std::mt19937_64 rng(13);
    for (const auto& d : {Dictionary::fourier(9), Dictionary::histogram(6), Dictionary::haar(2),
                          Dictionary::piecewise_poly(2, 3)}) {
        const Eigen::VectorXd c = oracle::gaussian_vector(d.dim(), rng);
        const auto p = in_model(d, c, 0.0);
        const auto f = fit(p, sample(p, 400, 2));
        CHECK(f.solved);
        CHECK(f.excess_risk < 1e-18);
    }
}

TEST_CASE("fit: population surrogate returns the projection") {
    const RegressionProblem p(Dictionary::fourier(7), FourierSeriesTarget{}, {NoiseLevelKind::Constant, 1.0});
    const auto f = population_fit(p);
    CHECK(f.solved);
    CHECK(f.beta_hat.isApprox(project_target(p).beta_m));
    CHECK(f.excess_risk == 0.0);
    CHECK(f.gram_perturbation_opnorm == 0.0);
}

TEST_CASE("fit: matches direct least squares") {
    std::mt19937_64 rng(31);
    for (const auto& d : {Dictionary::fourier(15), Dictionary::histogram(9), Dictionary::haar(3),
                          Dictionary::piecewise_poly(4, 2)}) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto p = in_model(d, oracle::gaussian_vector(d.dim(), rng), 0.5, NoiseLaw::BoundedUniform);
            const auto data = sample(p, 300, 100 + rep);
            const auto f = try_fit(d, data, project_target(p).beta_m);
            if (!f.solved) continue;
            const Eigen::VectorXd ls = oracle::least_squares(d, data.x, data.y);
            CHECK((f.beta_hat - ls).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("fit: diagnostics are consistent") {
    const auto d = Dictionary::fourier(7);
    const RegressionProblem p(d, FourierSeriesTarget{}, {NoiseLevelKind::Constant, 1.0}, {NoiseLaw::BoundedUniform, 2.5});
    const auto pr = project_target(p);
    const auto data = sample(p, 250, 9);
    const auto f = fit(d, data, pr.beta_m);
    const Eigen::MatrixXd Phi = design_matrix(d, data.x);
    const double n = 250.0;
    Eigen::VectorXd Y(250);
    for (int i = 0; i < 250; ++i) Y[i] = data.y[static_cast<std::size_t>(i)];
    CHECK((f.A - (Phi.transpose() * Phi / n - Eigen::MatrixXd::Identity(7, 7))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.E - Phi.transpose() * Y / n).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.F - Phi.transpose() * (Y - Phi * pr.beta_m) / n).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(f.F_norm_sq == doctest::Approx(f.F.squaredNorm()));
    CHECK(f.gram_perturbation_opnorm == doctest::Approx(oracle::power_opnorm(f.A)).epsilon(1e-8));
    CHECK(f.excess_risk == doctest::Approx((f.beta_hat - pr.beta_m).squaredNorm()));
    // excess risk equals the squared L2 distance of the functions
    const ModelFunction diff(d, f.beta_hat - pr.beta_m);
    const double l2 = lq_norm(diff, 2.0);
    CHECK(l2 * l2 == doctest::Approx(f.excess_risk).epsilon(1e-8));
    const auto lean = fit(d, data, pr.beta_m, {std::nullopt, false});
    CHECK(lean.A.size() == 0);
    CHECK(lean.beta_hat == f.beta_hat);
}

TEST_CASE("fit: excess-risk identity on random fits") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        const auto d = rep % 2 ? Dictionary::fourier(5) : Dictionary::piecewise_poly(2, 1);
        const auto p = in_model(d, oracle::gaussian_vector(d.dim(), rng), 1.0);
        const auto f = fit(p, sample(p, 60, static_cast<std::uint64_t>(rep)));
        const double l2 = lq_norm(ModelFunction(d, f.beta_hat - f.beta_m), 2.0);
        CHECK(l2 * l2 == doctest::Approx(f.excess_risk).epsilon(1e-8));
    }
}

TEST_CASE("fit: singular systems are reported") {
    const auto d = Dictionary::histogram(8);
    const auto p = in_model(d, Eigen::VectorXd::Ones(8), 1.0);
    const auto data = sample(p, 3, 1);
    const auto f = try_fit(d, data, Eigen::VectorXd::Ones(8));
    CHECK_FALSE(f.solved);
    CHECK(f.min_eigenvalue < kSingularityThreshold);
    CHECK(std::isinf(f.excess_risk));
    CHECK_THROWS_AS(fit(d, data, Eigen::VectorXd::Ones(8)), FitError);
    const auto gs = solve_gram_system(-Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(3));
    CHECK_FALSE(gs.solved);
}

TEST_CASE("fit: mean excess risk near D sigma^2 / n") {
    const auto d = Dictionary::fourier(5);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[1] = 1.0;
    const auto p = in_model(d, c, 1.0);
    std::vector<double> risks;
    for (int rep = 0; rep < 1000; ++rep) risks.push_back(fit(p, sample(p, 5000, 1000 + static_cast<std::uint64_t>(rep))).excess_risk);
    CHECK(mean(risks) == doctest::Approx(0.001).epsilon(0.10));
}

TEST_CASE("fit: second moment of F matches D C_m^2 / n") {
    const auto d = Dictionary::fourier(5);
    const RegressionProblem p(d, FourierSeriesTarget{2.0, 1.0, 41}, {NoiseLevelKind::Constant, 0.5},
                              {NoiseLaw::BoundedUniform, 2.5});
    const auto pr = project_target(p);
    const int n = 400;
    std::vector<double> F;
    for (int rep = 0; rep < 4000; ++rep) {
        F.push_back(try_fit(d, sample(p, n, 50000 + static_cast<std::uint64_t>(rep)), pr.beta_m, {std::nullopt, false}).F_norm_sq);
    }
    CHECK(mean(F) == doctest::Approx(5 * pr.oracle.Cm_sq / n).epsilon(0.05));
}

TEST_CASE("gram_opnorm_identity_check: examples") {
    SUBCASE("A = 0") {
        const auto r = gram_opnorm_identity_check(Eigen::MatrixXd::Zero(4, 4), 50);
        CHECK(r.opnorm == 0.0);
        CHECK(r.probe_sup == 0.0);
        CHECK(r.consistent);
    }
    SUBCASE("singular pair attains the norm") {
        Eigen::MatrixXd M = Eigen::MatrixXd::Random(6, 6);
        const Eigen::MatrixXd A = 0.5 * (M + M.transpose());
        const auto r = gram_opnorm_identity_check(A, 10);
        CHECK(r.singular_pair == doctest::Approx(oracle::power_opnorm(A)).epsilon(1e-9));
        CHECK(r.opnorm == doctest::Approx(oracle::power_opnorm(A)).epsilon(1e-9));
    }
    SUBCASE("random data") {
        const auto d = Dictionary::fourier(9);
        const auto p = in_model(d, Eigen::VectorXd::Zero(9), 1.0);
        const auto r = gram_opnorm_identity_check(sample(p, 200, 12), d, 500, 3);
        CHECK(r.probe_sup <= r.opnorm + 1e-9);
        CHECK(r.consistent);
    }
}

TEST_CASE("lambda_opnorm: examples") {
    CHECK(lambda_opnorm(Eigen::MatrixXd::Identity(3, 3), 1.0) == doctest::Approx(3.0));
    CHECK(lambda_opnorm(Eigen::MatrixXd::Zero(4, 4), 1.0) == 0.0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    A(1, 0) = 1.0;
    CHECK(lambda_opnorm(A, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("lambda_opnorm: dominates the induced weighted norm") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const int D = 2 + rep % 7;
        Eigen::MatrixXd A(D, D);
        for (int i = 0; i < D; ++i) A.col(i) = oracle::gaussian_vector(D, rng);
        const double induced = lambda_induced_norm(A, 1.0);
        CHECK(lambda_opnorm(A, 1.0) >= induced - 1e-12);
        // induced norm bounds |A v| / |v| in the weighted l1 norm
        const Eigen::VectorXd v = oracle::gaussian_vector(D, rng);
        CHECK(lambda_norm(Eigen::VectorXd(A * v), 1.0) <= induced * lambda_norm(v, 1.0) + 1e-9);
    }
}

TEST_CASE("estimator_regularity: noiseless in-model member") {
    const auto d = Dictionary::fourier(9);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(9);
    c[1] = 0.3;
    c[2] = 0.2333333333333333;  // lambda norm 0.6 + 0.7 = 1.3
    const auto p = in_model(d, c, 0.0);
    const auto f = fit(p, sample(p, 500, 1), {1.0, true});
    const LambdaClass cls{1.0, lambda_norm(c, 1.0), 0.2};
    const auto r = estimator_regularity(f, d, cls, 1.0, 10.0);
    CHECK(r.member);
    CHECK(r.norm_margin == doctest::Approx(cls.L1).epsilon(1e-6));
    CHECK(r.F_lambda < 1e-12);
    const auto h = Dictionary::histogram(4);
    const auto ph = in_model(h, Eigen::VectorXd::Ones(4), 0.0);
    CHECK_THROWS_AS(estimator_regularity(fit(ph, sample(ph, 100, 1)), h, cls, 1.0, 10.0), UnsupportedError);
}
