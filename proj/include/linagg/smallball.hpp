#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linagg/model.hpp"

namespace linagg {

/// P(|f(X)| >= kappa ||f||_2) under the uniform design.
/// Throws ParameterError for the zero function or kappa <= 0.
double smallball_probability(const ModelFunction& f, double kappa);

struct SmallBallEstimate {
    double kappa0 = 0.0;
    /// min over probed directions of P(|s(X)| >= kappa0 ||s||_2)
    double beta0_upper = 1.0;
    /// Paley-Zygmund (1 - kappa0^2) / R_m^2
    double beta0_lower = 0.0;
    int probed_directions = 0;
    std::optional<ModelFunction> worst_direction;
    std::string worst_tag;
    DictionaryKind kind = DictionaryKind::Fourier;
    int dim = 0;

    /// V0 = beta0^-2 kappa0^-4 evaluated at the lower bracket.
    double v0_upper() const;
    /// V0 evaluated at the upper bracket.
    double v0_lower() const;

    static std::string csv_header();
    std::string csv_row() const;
};

struct Beta0Options {
    int random_directions = 512;
    std::uint64_t seed = 1;
    /// Skip basis functions and random probes; keep the adversarial candidates only.
    bool adversarial_only = false;
};

/// Throws ParameterError unless kappa0 in (0, 1) and random_directions >= 1
/// (random_directions is ignored with adversarial_only).
SmallBallEstimate estimate_beta0(const Dictionary& dict, double kappa0,
                                 const Beta0Options& options = {});

/// Paley-Zygmund lower bracket (1 - kappa^2) / R_m^2.
double paley_zygmund_lower(const Dictionary& dict, double kappa);

/// Kind-specific adversarial directions with a tag each.
std::vector<std::pair<std::string, ModelFunction>> adversarial_directions(const Dictionary& dict);

/// (kappa0 ||F_l||_2 (l+1))^{-1/2}.
double fejer_smallball_bound(int l, double kappa0);
/// 3^{1/4} sqrt2 kappa0^{-1/2} D^{-3/4}.
double fourier_beta0_asymptote(int dim, double kappa0);

struct SmallBallCaps {
    /// inf over probes of P(f != 0): cap on beta0
    double beta0_cap = 1.0;
    /// inf over probes of ||f||_inf / ||f||_2: cap on kappa0
    double kappa0_cap = 0.0;
    /// q -> inf over probes of (||f||_q / ||f||_2)^q: cap on beta0 kappa0^q
    std::map<double, double> moment_caps;
    bool constants_in_model = false;
    int used_probes = 0;
    std::vector<std::string> warnings;

    /// beta0 kappa0^2 <= 1 and, with constants in the model, kappa0 <= 1.
    bool universal_checks(double beta0, double kappa0) const;
};

SmallBallCaps prop1_upper_bounds(const Dictionary& dict, const std::vector<ModelFunction>& probes,
                               std::span<const double> q_list = {});

/// Weighted-l1 class with sum_k k^nu |beta_k| <= L1 and ||f||_inf >= L2.
struct LambdaClass {
    double nu = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
};

/// sum_{k>=1} k^{-s} for s > 1: partial sum plus Euler-Maclaurin tail
/// (remainder below 1e-12). Throws ParameterError for s <= 1.
double zeta_series(double s);

/// C_nu = sum_k k^{-2 nu}. Throws ParameterError for nu <= 1/2.
double lambda_constant(double nu);

/// sum_{k=1}^D k^nu |c_k| with 1-based k.
double lambda_norm(const Eigen::VectorXd& coeffs, double nu);
/// Throws UnsupportedError for non-Fourier dictionaries.
double lambda_norm(const ModelFunction& f, double nu);

struct LambdaMembership {
    bool member = false;
    double lambda_norm = 0.0;
    double sup = 0.0;
    /// L1 - lambda_norm
    double norm_margin = 0.0;
    /// sup - L2
    double sup_margin = 0.0;
};

LambdaMembership lambda_membership(const ModelFunction& f, const LambdaClass& cls);

/// beta0 = C_nu^-2 L2^2 L1^-4 (1 - kappa0^2) / 4.
double prop4_smallball_lower(const LambdaClass& cls, double kappa0);

struct SobolevCheck {
    bool included = false;
    /// L1^2 / sum_k k^{2(nu - gamma)}
    double q_threshold = 0.0;
};

/// Sufficient condition for the Sobolev ellipsoid W(gamma, Q) to sit in the
/// weighted-l1 ball of radius L1. Throws ParameterError when gamma <= nu + 1/2.
SobolevCheck sobolev_inclusion_check(double gamma, double Q, double nu, double L1);

/// Random coefficients of length dim with sum_k k^{2 gamma} beta_k^2 <= Q.
/// With extremal_nu set, returns the Cauchy-Schwarz equality direction
/// beta_k ~ k^{nu - 2 gamma} on the boundary Q instead of a random draw.
Eigen::VectorXd sample_sobolev_member(double gamma, double Q, int dim, std::mt19937_64& rng,
                                      std::optional<double> extremal_nu = std::nullopt);

/// Rejection sampler for members of the class in a Fourier dictionary.
/// Returns nullopt after max_tries rejections.
std::optional<ModelFunction> sample_lambda_member(const Dictionary& dict, const LambdaClass& cls,
                                                  std::mt19937_64& rng, int max_tries = 10000);

}  // namespace linagg
