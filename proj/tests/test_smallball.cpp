#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "linagg/error.hpp"
#include "linagg/fejer.hpp"
#include "linagg/smallball.hpp"
#include "linagg/stats.hpp"
#include "oracles.hpp"

using namespace linagg;

namespace {

Eigen::VectorXd unit_vector(int dim, int index) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[index] = 1.0;
    return v;
}

/// Grid frequency of |f| >= kappa ||f||_2, an independent check of the root bracketing.
double grid_probability(const Dictionary& d, const Eigen::VectorXd& c, double kappa, int m) {
    const double threshold = kappa * c.norm();
    int hits = 0;
    for (double x : oracle::grid(d, m)) hits += std::abs(oracle::value(d, c, x)) >= threshold;
    return static_cast<double>(hits) / m;
}

}  // namespace

TEST_CASE("smallball_probability: examples") {
    const auto f3 = Dictionary::fourier(3);
    CHECK(smallball_probability(ModelFunction::basis(f3, 0), 0.5) == doctest::Approx(1.0));
    const auto h8 = Dictionary::histogram(8);
    for (double kappa : {0.01, 0.5, 1.0, 2.0, std::sqrt(8.0)}) {
        CHECK(smallball_probability(ModelFunction::basis(h8, 3), kappa) == doctest::Approx(0.125).epsilon(1e-15));
    }
    CHECK(smallball_probability(ModelFunction::basis(f3, 1), 1.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(smallball_probability(ModelFunction::zero(f3), 0.5), ParameterError);
    CHECK_THROWS_AS(smallball_probability(ModelFunction::basis(f3, 0), 0.0), ParameterError);
}

TEST_CASE("smallball_probability: agrees with a dense grid") {
    std::mt19937_64 rng(41);
    const auto d = Dictionary::fourier(7);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::VectorXd c = oracle::gaussian_vector(7, rng);
        for (double kappa : {0.3, 0.8, 1.2}) {
            CHECK(smallball_probability(ModelFunction(d, c), kappa) ==
                  doctest::Approx(grid_probability(d, c, kappa, 400000)).epsilon(2e-4).scale(1.0));
        }
    }
}

TEST_CASE("smallball_probability: nonincreasing in kappa") {
    std::mt19937_64 rng(2);
    for (const auto& d : {Dictionary::fourier(9), Dictionary::histogram(6), Dictionary::haar(2),
                          Dictionary::piecewise_poly(2, 2)}) {
        for (int rep = 0; rep < 20; ++rep) {
            const ModelFunction f(d, oracle::gaussian_vector(d.dim(), rng));
            double previous = 1.0;
            for (double kappa = 0.05; kappa < 2.5; kappa += 0.05) {
                const double p = smallball_probability(f, kappa);
                CHECK(p <= previous + 1e-12);
                previous = p;
            }
        }
    }
}

TEST_CASE("estimate_beta0: examples") {
    SUBCASE("histogram D=8") {
        const auto est = estimate_beta0(Dictionary::histogram(8), 0.5);
        CHECK(est.beta0_upper == doctest::Approx(0.125));
        CHECK(est.beta0_lower == doctest::Approx(0.09375));
        REQUIRE(est.worst_direction.has_value());
        CHECK(smallball_probability(*est.worst_direction, 0.5) == doctest::Approx(est.beta0_upper));
    }
    SUBCASE("Fourier is capped by the Fejer bound") {
        for (int l : {4, 8, 16}) {
            const auto est = estimate_beta0(Dictionary::fourier(2 * l + 1), 0.5, {64, 3, false});
            CHECK(est.beta0_upper <= fejer_smallball_bound(l, 0.5));
            CHECK(est.beta0_lower == doctest::Approx(0.75 / (2 * l + 1)));
        }
    }
    SUBCASE("constants only") {
        for (double kappa : {0.1, 0.5, 0.99}) {
            CHECK(estimate_beta0(Dictionary::fourier(1), kappa).beta0_upper == 1.0);
            CHECK(estimate_beta0(Dictionary::histogram(1), kappa).beta0_upper == 1.0);
        }
    }
    SUBCASE("invalid kappa") {
        CHECK_THROWS_AS(estimate_beta0(Dictionary::histogram(4), 1.0), ParameterError);
        CHECK_THROWS_AS(estimate_beta0(Dictionary::histogram(4), 0.5, {0, 1, false}), ParameterError);
    }
}

TEST_CASE("estimate_beta0: brackets are ordered and beta0 kappa0^2 <= 1") {
    for (const auto& d : {Dictionary::fourier(11), Dictionary::histogram(10), Dictionary::haar(3),
                          Dictionary::piecewise_poly(3, 2)}) {
        for (double kappa : {0.2, 0.5, 0.9}) {
            const auto est = estimate_beta0(d, kappa, {128, 9, false});
            CHECK(est.beta0_lower >= 0.0);
            CHECK(est.beta0_lower <= est.beta0_upper + 1e-6);
            CHECK(est.beta0_upper <= 1.0);
            CHECK(est.beta0_upper * kappa * kappa <= 1.0);
            REQUIRE(est.worst_direction.has_value());
            CHECK(smallball_probability(*est.worst_direction, kappa) == doctest::Approx(est.beta0_upper));
        }
    }
}

TEST_CASE("estimate_beta0: seeded and reproducible") {
    const auto a = estimate_beta0(Dictionary::fourier(9), 0.5, {100, 77, false});
    const auto b = estimate_beta0(Dictionary::fourier(9), 0.5, {100, 77, false});
    CHECK(a.beta0_upper == b.beta0_upper);
    CHECK(a.worst_tag == b.worst_tag);
    CHECK(a.csv_row() == b.csv_row());
    CHECK(SmallBallEstimate::csv_header() == "kappa0,beta0_upper,beta0_lower,D,kind,worst_direction_tag");
}

TEST_CASE("Paley-Zygmund lower bracket holds for random directions") {
    std::mt19937_64 rng(99);
    for (const auto& d : {Dictionary::fourier(9), Dictionary::histogram(12), Dictionary::haar(2),
                          Dictionary::piecewise_poly(3, 1)}) {
        const double kappa = 0.5;
        const double lower = paley_zygmund_lower(d, kappa);
        CHECK(lower == doctest::Approx((1 - kappa * kappa) / sup_ratio_squared(d)));
        int violations = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const ModelFunction f(d, oracle::gaussian_vector(d.dim(), rng));
            if (smallball_probability(f, kappa) < lower - 1e-6) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("Fejer direction: small-ball decay in D") {
    std::vector<double> dims;
    std::vector<double> probs;
    for (int l : {8, 16, 32, 64, 128}) {
        const double p = smallball_probability(fejer_as_model_function(l), 0.5);
        CHECK(p <= fejer_smallball_bound(l, 0.5));
        dims.push_back(2.0 * l + 1);
        probs.push_back(p);
    }
    CHECK(loglog_fit(dims, probs).slope <= -0.70);
}

TEST_CASE("fourier_beta0_asymptote and fejer_smallball_bound") {
    CHECK(fourier_beta0_asymptote(17, 0.5) ==
          doctest::Approx(std::pow(3.0, 0.25) * std::sqrt(2.0) / std::sqrt(0.5) * std::pow(17.0, -0.75)));
    // (kappa ||F_l||_2 (l+1))^{-1/2}
    const double l2 = std::sqrt(FejerKernel(10).l2_norm_squared());
    CHECK(fejer_smallball_bound(10, 0.5) == doctest::Approx(1.0 / std::sqrt(0.5 * l2 * 11.0)));
    // the two agree to leading order
    CHECK(fejer_smallball_bound(1000, 0.5) / fourier_beta0_asymptote(2001, 0.5) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("prop1_upper_bounds: examples") {
    SUBCASE("histogram") {
        const auto d = Dictionary::histogram(6);
        std::vector<ModelFunction> probes;
        for (int k = 0; k < 6; ++k) probes.push_back(ModelFunction::basis(d, k));
        probes.push_back(ModelFunction(d, Eigen::VectorXd::Ones(6) / std::sqrt(6.0)));
        const std::vector<double> q{2.0, 4.0};
        const auto r = prop1_upper_bounds(d, probes, q);
        CHECK(r.beta0_cap == doctest::Approx(1.0 / 6));
        CHECK(r.kappa0_cap == doctest::Approx(1.0));
        CHECK(r.moment_caps.at(2.0) == doctest::Approx(1.0));
        CHECK(r.universal_checks(1.0 / 6, 1.0));
        CHECK_FALSE(r.universal_checks(1.0, 1.5));
    }
    SUBCASE("constants give kappa0 cap 1") {
        const auto d = Dictionary::fourier(5);
        const auto r = prop1_upper_bounds(d, {ModelFunction::basis(d, 0), ModelFunction::basis(d, 3)});
        CHECK(r.kappa0_cap == doctest::Approx(1.0));
        CHECK(r.constants_in_model);
    }
    SUBCASE("zero probes are skipped with a warning") {
        const auto d = Dictionary::fourier(3);
        const auto r = prop1_upper_bounds(d, {ModelFunction::zero(d), ModelFunction::basis(d, 1)});
        CHECK(r.used_probes == 1);
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("q=2 ratio is 1 for random probes") {
        std::mt19937_64 rng(8);
        const auto d = Dictionary::fourier(7);
        std::vector<ModelFunction> probes;
        for (int i = 0; i < 5; ++i) probes.emplace_back(d, oracle::gaussian_vector(7, rng));
        const std::vector<double> q{2.0};
        CHECK(prop1_upper_bounds(d, probes, q).moment_caps.at(2.0) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("lambda_norm: examples") {
    CHECK(lambda_norm(unit_vector(5, 0), 2.0) == 1.0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[1] = 1.0;
    c[2] = 1.0;
    CHECK(lambda_norm(c, 1.0) == doctest::Approx(5.0));
    CHECK(lambda_norm(Eigen::VectorXd::Zero(5), 1.0) == 0.0);
    CHECK(lambda_norm(ModelFunction(Dictionary::fourier(5), c), 1.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(lambda_norm(ModelFunction::basis(Dictionary::histogram(4), 1), 1.0), UnsupportedError);
}

TEST_CASE("lambda_membership: examples") {
    const auto one = ModelFunction::basis(Dictionary::fourier(5), 0);
    const auto in = lambda_membership(one, {1.0, 2.0, 0.5});
    CHECK(in.member);
    CHECK(in.norm_margin == doctest::Approx(1.0));
    CHECK(in.sup_margin == doctest::Approx(0.5));
    CHECK_FALSE(lambda_membership(one, {1.0, 0.5, 0.5}).member);
    CHECK_FALSE(lambda_membership(ModelFunction::zero(Dictionary::fourier(5)), {1.0, 10.0, 1e-9}).member);
}

TEST_CASE("lambda_constant and zeta_series") {
    CHECK(lambda_constant(1.0) == doctest::Approx(oracle::pi * oracle::pi / 6).epsilon(1e-13));
    for (double s : {1.1, 1.5, 2.0, 3.0, 7.5}) {
        CHECK(zeta_series(s) == doctest::Approx(std::riemann_zeta(s)).epsilon(1e-12));
    }
    CHECK(lambda_constant(0.75) == doctest::Approx(std::riemann_zeta(1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_constant(0.5), ParameterError);
    CHECK_THROWS_AS(zeta_series(1.0), ParameterError);
}

TEST_CASE("prop4_smallball_lower: examples") {
    CHECK(prop4_smallball_lower({1.0, 1.0, 1.0}, std::sqrt(0.5)) == doctest::Approx(0.046197).epsilon(1e-4));
    const double c = oracle::pi * oracle::pi / 6;
    CHECK(prop4_smallball_lower({1.0, 1.0, 1.0}, std::sqrt(0.5)) == doctest::Approx(1.0 / (8 * c * c)));
    CHECK(prop4_smallball_lower({1.0, 2.0, 0.5}, 1.0 - 1e-12) < 1e-12);
    CHECK_THROWS_AS(prop4_smallball_lower({0.5, 1.0, 1.0}, 0.5), ParameterError);
    CHECK_THROWS_AS(prop4_smallball_lower({1.0, 1.0, 1.0}, 1.0), ParameterError);
}

TEST_CASE("prop4_smallball_lower holds on sampled class members") {
    std::mt19937_64 rng(2024);
    const LambdaClass cls{1.0, 1.0, 0.3};
    const auto d = Dictionary::fourier(15);
    const double kappa = std::sqrt(0.5);
    const double lower = prop4_smallball_lower(cls, kappa);
    int violations = 0;
    for (int i = 0; i < 200; ++i) {
        const auto f = sample_lambda_member(d, cls, rng);
        REQUIRE(f.has_value());
        CHECK(lambda_membership(*f, cls).member);
        if (smallball_probability(*f, kappa) < lower - 1e-6) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("sobolev_inclusion_check: examples") {
    const auto r = sobolev_inclusion_check(2.0, 0.6, 1.0, 1.0);
    CHECK(r.q_threshold == doctest::Approx(6.0 / (oracle::pi * oracle::pi)).epsilon(1e-12));
    CHECK(r.included);
    CHECK_FALSE(sobolev_inclusion_check(2.0, 0.61, 1.0, 1.0).included);
    CHECK(sobolev_inclusion_check(3.0, 0.0, 1.0, 1.0).included);
    CHECK_THROWS_AS(sobolev_inclusion_check(1.5, 0.1, 1.0, 1.0), ParameterError);
}

TEST_CASE("sobolev members at the threshold stay in the weighted ball") {
    std::mt19937_64 rng(7);
    for (double gamma : {1.6, 2.0, 3.0}) {
        const double nu = 1.0;
        const double L1 = 1.3;
        const double Q = sobolev_inclusion_check(gamma, 0.0, nu, L1).q_threshold;
        for (int i = 0; i < 100; ++i) {
            const Eigen::VectorXd b = sample_sobolev_member(gamma, Q, 61, rng);
            double energy = 0.0;
            for (int k = 0; k < b.size(); ++k) energy += std::pow(k + 1.0, 2 * gamma) * b[k] * b[k];
            CHECK(energy <= Q * (1 + 1e-12));
            CHECK(lambda_norm(b, nu) <= L1 + 1e-9);
        }
        const Eigen::VectorXd extremal = sample_sobolev_member(gamma, Q, 4001, rng, nu);
        CHECK(lambda_norm(extremal, nu) <= L1 + 1e-9);
        double partial = 0.0;
        for (int k = 1; k <= 4001; ++k) partial += std::pow(k, 2 * (nu - gamma));
        // Cauchy-Schwarz equality: the norm reaches L1 up to the truncated series tail
        CHECK(lambda_norm(extremal, nu) ==
              doctest::Approx(L1 * std::sqrt(partial / std::riemann_zeta(2 * (gamma - nu)))).epsilon(1e-6));
    }
}
