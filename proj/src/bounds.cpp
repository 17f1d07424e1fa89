#include "linagg/bounds.hpp"

#include <cmath>

#include "linagg/error.hpp"
#include "linagg/smallball.hpp"

namespace linagg {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
}

}  // namespace

TheoremABound theorem_A_bound(const BoundInputs& b) {
    require(b.beta0 > 0.0 && b.beta0 <= 1.0, "beta0 must lie in (0, 1]");
    require(b.kappa0 > 0.0 && b.kappa0 <= 1.0, "kappa0 must lie in (0, 1]");
    require(b.sigma >= 0.0, "sigma must be nonnegative");
    require(b.D >= 1, "D must be positive");
    require(b.n >= 1, "n must be positive");
    require(b.x > 0.0, "x must be positive");
    const double pre = 16.0 / (b.beta0 * b.kappa0 * b.kappa0);
    const double n = static_cast<double>(b.n);
    TheoremABound r;
    r.risk_bound = pre * pre * b.sigma * b.sigma * b.D * b.x / n;
    r.failure_prob = std::exp(-b.beta0 * b.beta0 * n / 4.0) + 1.0 / b.x;
    if (b.omega0_fail) r.failure_prob += *b.omega0_fail;
    r.n_min = 400.0 * 400.0 * b.D / (b.beta0 * b.beta0);
    r.valid = n >= r.n_min;
    return r;
}

Interval theorem2_interval(double Cm_sq, int D, long long n, double epsilon, double a_minus,
                           double a_plus) {
    require(D >= 1 && n >= 1, "D and n must be positive");
    const double center = D * Cm_sq / static_cast<double>(n);
    Interval r;
    r.low = (1.0 - epsilon) * center;
    r.high = (1.0 + epsilon) * center;
    const double ln_n = std::log(static_cast<double>(n));
    r.in_dimension_window = n > 1 && a_minus * ln_n * ln_n <= D &&
                            D <= a_plus * std::sqrt(static_cast<double>(n)) / ln_n;
    return r;
}

double theorem2_epsilon(double A0, int D, long long n) {
    const double nn = static_cast<double>(n);
    return A0 * std::max(std::sqrt(std::log(nn) / D), D / std::sqrt(nn));
}

LambdaClassBound theorem4_bound(const LambdaClass& cls, double sigma, int D, long long n, double x,
                             std::optional<double> L_nu) {
    require(cls.nu > 0.5, "nu must exceed 1/2");
    require(cls.L1 > 0.0 && cls.L2 > 0.0, "L1 and L2 must be positive");
    require(D >= 1 && n >= 2, "D must be positive and n at least 2");
    require(x > 0.0, "x must be positive");
    const double c_nu = lambda_constant(cls.nu);
    LambdaClassBound r;
    r.kappa0 = 1.0 / std::sqrt(2.0);
    r.beta0 = cls.L2 * cls.L2 / (8.0 * c_nu * c_nu * std::pow(cls.L1, 4));
    const double pre = 16.0 / (r.beta0 * r.kappa0 * r.kappa0);
    r.prefactor = pre * pre;
    const double nn = static_cast<double>(n);
    r.risk_bound = r.prefactor * sigma * sigma * D * x / nn;
    r.window_low = std::pow(2.0 * std::sqrt(2.0) * cls.L1 / cls.L2, 1.0 / cls.nu);
    const double growth = std::pow(nn / std::log(nn), 1.0 / (2.0 * (cls.nu + 1.0)));
    if (L_nu) {
        r.L_nu = *L_nu;
        r.window_high = r.L_nu * growth;
    } else {
        r.window_high = nn * r.beta0 * r.beta0 / (400.0 * 400.0);
        r.L_nu = r.window_high / growth;
    }
    r.failure_prob = std::exp(-r.beta0 * r.beta0 * nn / 4.0) + 1.0 / (nn * nn) + 2.0 / x;
    r.valid = r.window_low <= D && D <= r.window_high;
    return r;
}

TailRadii concentration_tail_bounds(double sigmaF_sq, double b, double mean_sup, long long n,
                                    double x, double epsilon) {
    require(sigmaF_sq >= 0.0 && b >= 0.0 && mean_sup >= 0.0 && x >= 0.0,
            "tail inputs must be nonnegative");
    require(epsilon > 0.0, "epsilon must be positive");
    require(n >= 1, "n must be positive");
    const double nn = static_cast<double>(n);
    const double base = std::sqrt(2.0 * sigmaF_sq * x / nn) + epsilon * mean_sup;
    TailRadii r;
    r.bousquet = base + (1.0 / epsilon + 1.0 / 3.0) * b * x / nn;
    r.klein_rio = base + (1.0 / epsilon + 1.0) * b * x / nn;
    return r;
}

RioBound rio_lower_mean_bound(double mean_sq, double sigma_sq, double b, long long n,
                              double kappa_n, double a1_minus) {
    require(mean_sq >= 0.0 && sigma_sq >= 0.0 && b >= 0.0, "inputs must be nonnegative");
    require(n >= 1, "n must be positive");
    require(kappa_n >= 0.0, "kappa_n must be nonnegative");
    const double nn = static_cast<double>(n);
    const double root = std::sqrt(mean_sq);
    RioBound r;
    r.lower = (1.0 - kappa_n * a1_minus) * root;
    const double k2 = kappa_n * kappa_n;
    r.valid = kappa_n > 0.0 && kappa_n < 1.0 && k2 * mean_sq >= sigma_sq / nn &&
              k2 * root >= b / nn;
    return r;
}

double lemma1_envelope(int D, long long n, double alpha, double u) {
    const double nn = static_cast<double>(n);
    const double x = alpha * std::log(nn);
    return u * D / std::sqrt(nn) + u * std::sqrt(2.0 * D * x / nn) + u * u * D * x / (3.0 * nn);
}

double lemma3_envelope(int D, long long n, double nu) {
    const double nn = static_cast<double>(n);
    return 4.0 * std::pow(D + 1.0, nu + 1.0) / (nu + 1.0) * std::sqrt(3.0 * std::log(nn) / nn);
}

double lambda_F_threshold(int D, long long n, double nu, double sigma, double z) {
    const double nn = static_cast<double>(n);
    return std::pow(D + 1.0, nu + 1.0) / (nu + 1.0) * std::sqrt(2.0 * sigma * sigma * z / nn);
}

const std::vector<std::string>& unspecified_constants() {
    static const std::vector<std::string> names{"A0", "A_minus", "A_plus", "A1_minus", "L_nu"};
    return names;
}

}  // namespace linagg
