#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linagg/erm.hpp"
#include "linagg/smallball.hpp"
#include "linagg/stats.hpp"

namespace linagg {

struct GridPoint {
    long long n = 0;
    int D = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct Campaign {
    std::string name = "campaign";
    RegressionProblem problem;
    std::vector<GridPoint> grid;
    int replicates = 1;
    std::uint64_t master_seed = 1;
    /// Worker threads; results do not depend on this.
    int workers = 1;
    /// Record the weighted operator norm of A_{n,D} with this nu.
    std::optional<double> nu;
};

struct ReplicateRecord {
    int grid_index = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    long long n = 0;
    int D = 0;
    bool solved = false;
    double excess_risk = 0.0;
    double opnorm = 0.0;
    double lambda_opnorm = 0.0;
    double F_norm_sq = 0.0;

    friend bool operator==(const ReplicateRecord&, const ReplicateRecord&) = default;
};

/// Oracle quantities of one grid point.
struct GridOracle {
    GridPoint point;
    OracleReport oracle;
    /// D C_m^2 / n
    double center = 0.0;
};

struct GridSummary {
    GridPoint point;
    int solved = 0;
    int unsolved = 0;
    double center = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double q05 = 0.0;
    double q95 = 0.0;
    double mean_ratio = 0.0;
    double median_ratio = 0.0;
    /// (q95 - q05) / (2 median)
    double half_width = 0.0;
    double mean_F_norm_sq = 0.0;
    double median_opnorm = 0.0;
    double median_lambda_opnorm = 0.0;
    /// fraction of replicates inside the interval, one entry per epsilon
    std::vector<double> coverage;

    friend bool operator==(const GridSummary&, const GridSummary&) = default;
};

struct ExperimentReport {
    std::string campaign;
    std::uint64_t master_seed = 0;
    int replicates = 0;
    std::vector<ReplicateRecord> records;
    std::vector<GridOracle> oracles;
    std::vector<double> epsilon_grid;
    std::vector<GridSummary> summaries;
    std::vector<std::string> notes;
};

/// Runs task(i) for i in [0, count) on up to `workers` threads. The first
/// exception (by index) is rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

/// Problem with the dictionary resized to D; in-model coefficients are zero padded.
RegressionProblem problem_at(const RegressionProblem& problem, int D);

/// Seeded replicate fits over the grid, records in (grid, replicate) order.
ExperimentReport run_replicates(const Campaign& campaign);

/// Aggregates recomputed from records and oracles.
std::vector<GridSummary> summarize(const std::vector<ReplicateRecord>& records,
                                   const std::vector<GridOracle>& oracles,
                                   const std::vector<double>& epsilon_grid);

/// Coverage of (1 +- eps) D C_m^2 / n per epsilon, half-widths and median ratios.
ExperimentReport run_concentration_campaign(const Campaign& campaign,
                                            const std::vector<double>& epsilon_grid);

struct RateSweepReport {
    ExperimentReport base;
    long long n = 0;
    std::vector<int> dims;
    std::vector<double> mean_excess;
    LinearFit measured;
    /// Theorem-A bound with beta0 kappa0^2 = D^{-3/4} (Fourier) or 1/D (otherwise).
    std::vector<double> corollary_envelope;
    LinearFit corollary_fit;
    /// Theorem-A bound with the Paley-Zygmund bracket at kappa0.
    std::vector<double> measured_envelope;
    LinearFit measured_envelope_fit;
    double kappa0 = 0.5;
    double x = 10.0;
    bool degenerate = false;
};

/// Requires a single n, at least 3 dimensions spanning a decade.
RateSweepReport run_rate_sweep(const Campaign& campaign, double kappa0 = 0.5, double x = 10.0);

struct Beta0Row {
    SmallBallEstimate estimate;
    /// small-ball probability of the Fejer direction of order l (Fourier only)
    std::optional<double> fejer_probability;
    std::optional<double> fejer_bound;
    std::optional<double> asymptote;
};

struct Beta0ScalingReport {
    DictionaryKind kind = DictionaryKind::Fourier;
    double kappa0 = 0.5;
    std::vector<Beta0Row> rows;
    LinearFit upper_fit;
    LinearFit lower_fit;
    std::optional<LinearFit> fejer_fit;
};

/// dims must span at least one decade.
Beta0ScalingReport run_beta0_scaling(const Dictionary& family, const std::vector<int>& dims,
                                     double kappa0, const Beta0Options& options);

struct OpnormRow {
    GridPoint point;
    double median_opnorm = 0.0;
    double median_lambda_opnorm = 0.0;
    double lemma1_envelope = 0.0;
    int lemma1_violations = 0;
    double expected_violations = 0.0;
    double lemma3_envelope = 0.0;
    double max_lambda_ratio = 0.0;
};

struct OpnormScalingReport {
    ExperimentReport base;
    std::vector<OpnormRow> rows;
    /// slope of log median opnorm vs log n, one per distinct D
    std::vector<std::pair<int, LinearFit>> slope_vs_n;
    /// slope vs log D, one per distinct n
    std::vector<std::pair<long long, LinearFit>> slope_vs_D;
    double alpha = 3.0;
    double u = 0.0;
    double nu = 1.0;
};

/// Grid is the product n_grid x D_grid. u is the basis sup bound sqrt(R_m^2 / D) when unset.
OpnormScalingReport run_opnorm_scaling(const Campaign& campaign, double alpha = 3.0,
                                       std::optional<double> u = std::nullopt);

struct TailRow {
    double x = 0.0;
    double bousquet_radius = 0.0;
    double klein_rio_radius = 0.0;
    double upper_frequency = 0.0;
    double lower_frequency = 0.0;
    double allowed = 0.0;
    bool vacuous = false;
    bool pass = false;
};

struct TailCoverageReport {
    ExperimentReport base;
    double sigmaF_sq = 0.0;
    double b = 0.0;
    double epsilon = 0.0;
    double mean_F = 0.0;
    double mean_F_sq = 0.0;
    double predicted_F_sq = 0.0;
    double moment_ratio = 0.0;
    bool moment_pass = false;
    std::vector<TailRow> rows;
    bool pass = false;
};

/// sup over the unit ball of Var(psi_m s): top eigenvalue of E[psi_m^2 phi phi^T].
double residual_sigma_sq(const RegressionProblem& problem, const Eigen::VectorXd& beta_m);
/// sup |psi_m s| over the unit ball for bounded noise; infinity otherwise.
double residual_envelope(const RegressionProblem& problem, const Eigen::VectorXd& beta_m);

/// Requires exactly one grid point and a bounded noise law.
TailCoverageReport run_tail_coverage(const Campaign& campaign, const std::vector<double>& x_grid);

}  // namespace linagg
