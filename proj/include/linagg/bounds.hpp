#pragma once

#include <optional>
#include <string>
#include <vector>

namespace linagg {

struct LambdaClass;

struct BoundInputs {
    double beta0 = 1.0;
    double kappa0 = 1.0;
    double sigma = 1.0;
    int D = 1;
    long long n = 1;
    double x = 1.0;
    /// Probability of the complement of a localization event, added to the failure probability.
    std::optional<double> omega0_fail;
};

struct TheoremABound {
    double risk_bound = 0.0;
    double failure_prob = 0.0;
    double n_min = 0.0;
    /// n >= n_min
    bool valid = false;
};

/// (16 / (beta0 kappa0^2))^2 sigma^2 D x / n, failure exp(-beta0^2 n / 4) + 1/x,
/// n_min = 400^2 D / beta0^2. Throws ParameterError on out-of-range inputs.
TheoremABound theorem_A_bound(const BoundInputs& b);

struct Interval {
    double low = 0.0;
    double high = 0.0;
    /// A_-(ln n)^2 <= D <= A_+ sqrt(n) / ln n
    bool in_dimension_window = false;
};

/// ((1 - eps) D Cm^2 / n, (1 + eps) D Cm^2 / n). a_minus and a_plus are the
/// unspecified window constants.
Interval theorem2_interval(double Cm_sq, int D, long long n, double epsilon,
                           double a_minus = 1.0, double a_plus = 1.0);

/// A0 max(sqrt(ln n / D), D / sqrt(n)).
double theorem2_epsilon(double A0, int D, long long n);

struct LambdaClassBound {
    double beta0 = 0.0;
    double kappa0 = 0.0;
    double prefactor = 0.0;
    double risk_bound = 0.0;
    double window_low = 0.0;
    double window_high = 0.0;
    /// L_nu used for the upper window edge
    double L_nu = 0.0;
    double failure_prob = 0.0;
    bool valid = false;
};

/// Localized small-ball rate on a weighted-l1 class: kappa0 = 2^{-1/2},
/// beta0 = C_nu^-2 L2^2 L1^-4 / 8, bound (16/(beta0 kappa0^2))^2 sigma^2 D x / n.
/// Without an explicit L_nu the upper edge solves 400^2 D / beta0^2 = n.
LambdaClassBound theorem4_bound(const LambdaClass& cls, double sigma, int D, long long n, double x,
                             std::optional<double> L_nu = std::nullopt);

struct TailRadii {
    double bousquet = 0.0;
    double klein_rio = 0.0;
};

/// sqrt(2 sigma^2 x / n) + eps mean + (1/eps + 1/3) b x / n (upper deviation) and
/// sqrt(2 sigma^2 x / n) + eps mean + (1/eps + 1) b x / n (lower deviation).
TailRadii concentration_tail_bounds(double sigmaF_sq, double b, double mean_sup, long long n,
                                    double x, double epsilon);

struct RioBound {
    double lower = 0.0;
    bool valid = false;
};

/// (1 - kappa_n A_{1,-}) sqrt(mean_sq), valid when kappa_n^2 mean_sq >= sigma^2/n and
/// kappa_n^2 sqrt(mean_sq) >= b/n.
RioBound rio_lower_mean_bound(double mean_sq, double sigma_sq, double b, long long n,
                              double kappa_n, double a1_minus = 1.0);

/// u D / sqrt(n) + u sqrt(2 D x / n) + u^2 D x / (3n) with x = alpha ln n.
double lemma1_envelope(int D, long long n, double alpha, double u);

/// 4 (D+1)^{nu+1} / (nu+1) sqrt(3 ln n / n).
double lemma3_envelope(int D, long long n, double nu);

/// (D+1)^{nu+1} / (nu+1) sqrt(2 sigma^2 z / n).
double lambda_F_threshold(int D, long long n, double nu, double sigma, double z);

/// Names of the constants the bound calculators take as configuration.
const std::vector<std::string>& unspecified_constants();

}  // namespace linagg
