#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linagg/error.hpp"
#include "linagg/model.hpp"

namespace linagg {

/// Target inside the model: s* = sum_k coeffs[k] phi_k.
struct InModelTarget {
    Eigen::VectorXd coeffs;
};

/// s* = sum_{k=1}^K amplitude k^{-decay} phi_k in the Fourier basis, with
/// angle x on the 2pi domains and 2 pi x on [0, 1].
struct FourierSeriesTarget {
    double decay = 2.0;
    double amplitude = 1.0;
    int truncation = 201;
};

enum class PiecewiseShape { Step, Tent, Sawtooth };

/// Shapes on u = to_unit(x) with a break at u = 1/2:
/// Step = a sign(u - 1/2), Tent = a (1 - 2|u - 1/2|), Sawtooth = a (2 frac(2u) - 1).
struct PiecewiseSmoothTarget {
    PiecewiseShape shape = PiecewiseShape::Step;
    double amplitude = 1.0;
};

using Target = std::variant<InModelTarget, FourierSeriesTarget, PiecewiseSmoothTarget>;

enum class NoiseLevelKind { Constant, Heteroscedastic };

/// Constant: sigma(x) = sigma0. Heteroscedastic:
/// sigma(x) = sigma0 sqrt((1 + cos^2 theta) / (3/2)), so that E[sigma^2] = sigma0^2.
struct NoiseLevel {
    NoiseLevelKind kind = NoiseLevelKind::Constant;
    double sigma0 = 1.0;
};

enum class NoiseLaw { Gaussian, BoundedUniform, Rademacher, StudentT };

/// Standardized noise: E[eps] = 0, E[eps^2] = 1.
struct NoiseSpec {
    NoiseLaw law = NoiseLaw::Gaussian;
    /// Student-T degrees of freedom, must exceed 2.
    double dof = 2.5;
};

std::string to_string(NoiseLaw law);
NoiseLaw parse_noise_law(const std::string& name);
std::string to_string(PiecewiseShape shape);
PiecewiseShape parse_piecewise_shape(const std::string& name);

class RegressionProblem {
  public:
    /// Throws ParameterError on inconsistent targets (wrong length, bad dof, ...).
    RegressionProblem(Dictionary dict, Target target, NoiseLevel level = {}, NoiseSpec noise = {});

    const Dictionary& dictionary() const noexcept { return dict_; }
    const Target& target() const noexcept { return target_; }
    const NoiseLevel& noise_level() const noexcept { return level_; }
    const NoiseSpec& noise() const noexcept { return noise_; }

    double target_value(double x) const;
    double sigma(double x) const;
    double sigma_sq_mean() const { return level_.sigma0 * level_.sigma0; }
    /// sup |eps| for bounded laws, infinity otherwise.
    double noise_bound() const;
    /// Points where the target may be nonsmooth (interior of the domain).
    std::vector<double> target_breaks() const;
    /// Same problem with a new dictionary (target and noise kept).
    RegressionProblem with_dictionary(Dictionary dict) const;

  private:
    Dictionary dict_;
    Target target_;
    NoiseLevel level_;
    NoiseSpec noise_;
    std::optional<ModelFunction> series_;
};

struct Dataset {
    std::vector<double> x;
    std::vector<double> y;
    std::size_t size() const noexcept { return x.size(); }
    std::string to_csv() const;
};

/// n i.i.d. draws, X uniform on the domain. Throws ParameterError for n < 1.
Dataset sample(const RegressionProblem& problem, int n, std::uint64_t seed);

struct OracleReport {
    double Cm_sq = 0.0;
    double sigma_sq_mean = 0.0;
    double approx_err_sq = 0.0;
    /// (1/D) sum_k Var(psi_m phi_k)
    double Cm_sq_varform = 0.0;
};

struct Projection {
    Eigen::VectorXd beta_m;
    OracleReport oracle;
};

/// Exact for in-model and Fourier-series targets on a Fourier dictionary,
/// quadrature otherwise. Throws NumericError when quadrature fails.
Projection project_target(const RegressionProblem& problem);

struct FitOptions {
    /// Also compute the weighted operator norm of A_{n,D}.
    std::optional<double> nu;
    /// Keep A, E and F in the result.
    bool keep_matrices = true;
};

struct ErmFit {
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd beta_m;
    double excess_risk = 0.0;
    double gram_perturbation_opnorm = 0.0;
    double F_norm_sq = 0.0;
    std::optional<double> lambda_opnorm;
    bool solved = false;
    double min_eigenvalue = 0.0;
    int n = 0;
    Eigen::MatrixXd A;
    Eigen::VectorXd E;
    Eigen::VectorXd F;
};

/// Raised by fit() when I + A_{n,D} is numerically singular.
class FitError : public NumericError {
  public:
    FitError(double min_eigenvalue, double opnorm);
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }
    double opnorm() const noexcept { return opnorm_; }

  private:
    double min_eigenvalue_;
    double opnorm_;
};

constexpr double kSingularityThreshold = 1e-10;

/// Solves (I + A) beta = E. Sets solved = false below the singularity threshold.
struct GramSolve {
    Eigen::VectorXd beta;
    bool solved = false;
    double min_eigenvalue = 0.0;
    double opnorm = 0.0;
};
GramSolve solve_gram_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& E);

/// n x D design matrix Phi_{ik} = phi_k(x_i).
Eigen::MatrixXd design_matrix(const Dictionary& dict, std::span<const double> x);

/// Least-squares fit; beta_m is the projection of the target.
ErmFit try_fit(const Dictionary& dict, const Dataset& data, const Eigen::VectorXd& beta_m,
               const FitOptions& options = {});
/// As try_fit but throws FitError when unsolved.
ErmFit fit(const Dictionary& dict, const Dataset& data, const Eigen::VectorXd& beta_m,
           const FitOptions& options = {});
ErmFit fit(const RegressionProblem& problem, const Dataset& data, const FitOptions& options = {});

/// Infinite-data surrogate: A = 0 and E = beta_m.
ErmFit population_fit(const RegressionProblem& problem);

/// Spectral norm of A and the sup formulation sup_{s,t} (P_n - P)(st) over
/// random unit pairs and the top eigenvector pair.
struct OpnormCheck {
    double opnorm = 0.0;
    double probe_sup = 0.0;
    double singular_pair = 0.0;
    bool consistent = true;
};
OpnormCheck gram_opnorm_identity_check(const Dataset& data, const Dictionary& dict, int n_probe,
                                       std::uint64_t seed = 1);
OpnormCheck gram_opnorm_identity_check(const Eigen::MatrixXd& A, int n_probe,
                                       std::uint64_t seed = 1);

/// sum_k k^nu max_l |A_kl| / l^nu (1-based indices).
double lambda_opnorm(const Eigen::MatrixXd& A, double nu);
/// Induced operator norm for the weighted l1 norm: max_l l^-nu sum_k k^nu |A_kl|.
double lambda_induced_norm(const Eigen::MatrixXd& A, double nu);

struct LambdaClass;

struct RegularityReport {
    bool member = false;
    double lambda_norm = 0.0;
    double sup = 0.0;
    double norm_margin = 0.0;
    double sup_margin = 0.0;
    double A_lambda = 0.0;
    double A_threshold = 0.0;
    double F_lambda = 0.0;
    double F_threshold = 0.0;
    /// Both event ingredients hold.
    bool event = false;
};

/// Checks s_hat in the class with (2 L1, L2/4) and the event ingredients
/// |A|_{Lambda,nu} <= 4(D+1)^{nu+1}/(nu+1) sqrt(3 ln n / n) <= 1/2 and
/// |F|_{Lambda,nu} <= (D+1)^{nu+1}/(nu+1) sqrt(2 sigma^2 z / n).
/// Throws UnsupportedError for non-Fourier dictionaries.
RegularityReport estimator_regularity(const ErmFit& fit, const Dictionary& dict,
                                      const LambdaClass& cls, double sigma, double z);

}  // namespace linagg
