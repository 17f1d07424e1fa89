#include "linagg/quadrature.hpp"

#include <numbers>

namespace linagg {

GaussLegendre::GaussLegendre(int n) : nodes_(n), weights_(n) {
    if (n < 1) throw ParameterError("Gauss-Legendre rule needs at least one node");
    // Newton iteration on P_n from the Chebyshev initial guess.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double step = p0 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        nodes_[i] = -z;
        nodes_[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendre& GaussLegendre::rule64() {
    static const GaussLegendre rule(64);
    return rule;
}

}  // namespace linagg
