#include <atomic>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "linagg/error.hpp"
#include "linagg/experiments.hpp"
#include "linagg/report.hpp"

using namespace linagg;

namespace {

RegressionProblem bounded_series(int D, double sigma = 1.0) {
    return {Dictionary::fourier(D), FourierSeriesTarget{2.0, 1.0, 41}, {NoiseLevelKind::Constant, sigma},
            {NoiseLaw::BoundedUniform, 2.5}};
}

Campaign small_campaign(int workers) {
    return {"test", bounded_series(5), {{200, 5}, {400, 9}, {300, 3}}, 25, 99, workers, 1.0};
}

}  // namespace

TEST_CASE("parallel_for: visits every index once and rethrows") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(50, 3,
                                 [](std::size_t i) {
                                     if (i == 17) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("run_replicates: identical records for 1, 4 and 8 workers") {
    const auto one = run_replicates(small_campaign(1));
    const auto four = run_replicates(small_campaign(4));
    const auto eight = run_replicates(small_campaign(8));
    CHECK(one.records == four.records);
    CHECK(one.records == eight.records);
    CHECK(records_csv(one) == records_csv(eight));
    REQUIRE(one.records.size() == 75);
    CHECK(one.records[30].grid_index == 1);
    CHECK(one.records[30].replicate == 5);
    CHECK(one.records[30].seed == derive_seed(99, 1, 5));
}

TEST_CASE("run_concentration_campaign: aggregates recompute from records") {
    const std::vector<double> eps{0.1, 0.3, 0.6, 1.0};
    const auto r = run_concentration_campaign(small_campaign(2), eps);
    CHECK(summarize(r.records, r.oracles, r.epsilon_grid) == r.summaries);
    for (const auto& s : r.summaries) {
        for (std::size_t i = 1; i < s.coverage.size(); ++i) CHECK(s.coverage[i] >= s.coverage[i - 1]);
        CHECK(s.solved + s.unsolved == 25);
        CHECK(s.q05 <= s.median);
        CHECK(s.median <= s.q95);
    }
    const auto j = to_json(r);
    CHECK(j.contains("summaries"));
}

TEST_CASE("run_concentration_campaign: noiseless in-model target") {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[0] = 0.5;
    c[3] = -1.0;
    const RegressionProblem p(Dictionary::fourier(5), InModelTarget{c}, {NoiseLevelKind::Constant, 0.0});
    const Campaign camp{"quiet", p, {{100, 5}}, 10, 1, 2, std::nullopt};
    const auto r = run_concentration_campaign(camp, {0.5});
    for (const auto& rec : r.records) CHECK(rec.excess_risk < 1e-20);
}

TEST_CASE("run_concentration_campaign: unsolved fits are counted") {
    const Campaign camp{"tiny", bounded_series(9), {{4, 9}}, 5, 1, 1, std::nullopt};
    const auto r = run_concentration_campaign(camp, {0.5});
    CHECK(r.summaries[0].unsolved == 5);
    CHECK_FALSE(r.notes.empty());
}

TEST_CASE("run_concentration_campaign: half-width shrinks with D") {
    const Campaign camp{"widths", bounded_series(5), {{4000, 5}, {4000, 21}, {4000, 61}}, 200, 5, 4, std::nullopt};
    const auto r = run_concentration_campaign(camp, {0.5});
    CHECK(r.summaries[0].half_width > r.summaries[1].half_width);
    CHECK(r.summaries[1].half_width > r.summaries[2].half_width);
    for (const auto& s : r.summaries) CHECK(s.median_ratio == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("run_rate_sweep: preconditions and degenerate case") {
    const Campaign two{"rate", bounded_series(5), {{1000, 5}, {1000, 65}}, 5, 1, 1, std::nullopt};
    CHECK_THROWS_AS(run_rate_sweep(two), ParameterError);
    const Campaign narrow{"rate", bounded_series(5), {{1000, 5}, {1000, 7}, {1000, 9}}, 5, 1, 1, std::nullopt};
    CHECK_THROWS_AS(run_rate_sweep(narrow), ParameterError);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[1] = 1.0;
    const RegressionProblem quiet(Dictionary::fourier(5), InModelTarget{c}, {NoiseLevelKind::Constant, 0.0});
    const Campaign flat{"rate", quiet, {{2000, 5}, {2000, 17}, {2000, 65}}, 3, 1, 2, std::nullopt};
    CHECK(run_rate_sweep(flat).degenerate);
}

TEST_CASE("run_rate_sweep: linear in D with the small-ball envelope at slope 5/2") {
    const Campaign camp{"rate", bounded_series(5), {{8000, 5}, {8000, 11}, {8000, 23}, {8000, 51}}, 60, 3, 4, std::nullopt};
    const auto r = run_rate_sweep(camp);
    CHECK_FALSE(r.degenerate);
    CHECK(r.measured.slope == doctest::Approx(1.0).epsilon(0.2));
    CHECK(r.corollary_fit.slope == doctest::Approx(2.5));
}

TEST_CASE("run_beta0_scaling: slopes per family") {
    Beta0Options opts{32, 1, false};
    SUBCASE("histogram upper and lower slope -1") {
        const auto r = run_beta0_scaling(Dictionary::histogram(4), {4, 8, 16, 32, 64}, 0.5, opts);
        CHECK(r.upper_fit.slope == doctest::Approx(-1.0));
        CHECK(r.lower_fit.slope == doctest::Approx(-1.0));
    }
    SUBCASE("Haar upper slope -1") {
        const auto r = run_beta0_scaling(Dictionary::haar(1), {4, 8, 16, 32, 64}, 0.5, opts);
        CHECK(r.upper_fit.slope == doctest::Approx(-1.0).epsilon(0.02));
    }
    SUBCASE("Fourier lower slope -1, upper at most -0.70") {
        const auto r = run_beta0_scaling(Dictionary::fourier(5), {17, 33, 65, 129, 257}, 0.5, {32, 1, true});
        CHECK(r.lower_fit.slope == doctest::Approx(-1.0));
        CHECK(r.upper_fit.slope <= -0.70);
        REQUIRE(r.fejer_fit.has_value());
        CHECK(r.fejer_fit->slope <= -0.70);
    }
    CHECK_THROWS_AS(run_beta0_scaling(Dictionary::histogram(4), {4, 8}, 0.5, opts), ParameterError);
}

TEST_CASE("run_opnorm_scaling: decay in n") {
    const Campaign camp{"opnorm", bounded_series(9), {{500, 9}, {2000, 9}, {8000, 9}}, 40, 2, 4, 1.0};
    const auto r = run_opnorm_scaling(camp, 3.0);
    REQUIRE(r.slope_vs_n.size() == 1);
    CHECK(r.slope_vs_n[0].second.slope == doctest::Approx(-0.5).epsilon(0.2));
    for (const auto& row : r.rows) {
        CHECK(row.median_opnorm < row.lemma1_envelope);
        CHECK(row.median_lambda_opnorm < row.lemma3_envelope);
    }
    const Campaign huge{"opnorm", bounded_series(3), {{1000000, 3}}, 3, 2, 1, std::nullopt};
    CHECK(run_opnorm_scaling(huge).rows[0].median_opnorm < 0.01);
}

TEST_CASE("run_tail_coverage: preconditions and the vacuous limit") {
    const RegressionProblem gauss(Dictionary::fourier(5), FourierSeriesTarget{}, {NoiseLevelKind::Constant, 1.0},
                                  {NoiseLaw::Gaussian, 2.5});
    CHECK_THROWS_AS(run_tail_coverage({"tails", gauss, {{100, 5}}, 10, 1, 1, std::nullopt}, {1.0}), ParameterError);
    CHECK_THROWS_AS(run_tail_coverage({"tails", bounded_series(5), {{100, 5}, {200, 5}}, 10, 1, 1, std::nullopt}, {1.0}),
                    ParameterError);
    const auto r = run_tail_coverage({"tails", bounded_series(5), {{500, 5}}, 300, 4, 4, std::nullopt}, {1e-9, 1.0, 3.0});
    CHECK(r.rows[0].vacuous);
    CHECK(r.moment_ratio == doctest::Approx(1.0).epsilon(0.15));
    for (const auto& row : r.rows) {
        CHECK(row.klein_rio_radius >= row.bousquet_radius);
        if (!row.vacuous) CHECK(row.pass);
    }
}

TEST_CASE("residual envelope and variance") {
    const auto p = bounded_series(5, 0.5);
    const auto pr = project_target(p);
    const double s2 = residual_sigma_sq(p, pr.beta_m);
    CHECK(s2 > 0.0);
    CHECK(std::isfinite(residual_envelope(p, pr.beta_m)));
    const RegressionProblem gauss(Dictionary::fourier(5), FourierSeriesTarget{}, {NoiseLevelKind::Constant, 1.0});
    CHECK(std::isinf(residual_envelope(gauss, project_target(gauss).beta_m)));
}
