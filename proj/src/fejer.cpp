#include "linagg/fejer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linagg/error.hpp"

namespace linagg {

FejerKernel::FejerKernel(int l) : l_(l) {
    if (l < 1) throw ParameterError("Fejer order must be at least 1");
}

ModelFunction FejerKernel::as_model_function(Domain domain) const {
    const Dictionary dict = Dictionary::fourier(dim(), domain);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
    c[0] = 1.0;
    for (int k = 1; k < l_; ++k) {
        c[2 * k - 1] = std::numbers::sqrt2 * (1.0 - static_cast<double>(k) / l_);
    }
    return {dict, std::move(c)};
}

double FejerKernel::operator()(double t) const {
    const double s = std::sin(0.5 * t);
    if (std::abs(s) < 1e-8) {
        // second-order expansion around the peak
        const double l = l_;
        return l - l * (l * l - 1.0) * t * t / 12.0;
    }
    const double num = std::sin(0.5 * l_ * t);
    return num * num / (l_ * s * s);
}

double FejerKernel::l2_norm_squared() const {
    const double l = l_;
    const double sum_sq = (l - 1.0) * l * (2.0 * l - 1.0) / 6.0;
    return 1.0 + 2.0 * sum_sq / (l * l);
}

ModelFunction fejer_as_model_function(int l, Domain domain) {
    return FejerKernel(l).as_model_function(domain);
}

double fejer_tail_bound(int l, double epsilon) {
    if (l < 1) throw ParameterError("Fejer order must be at least 1");
    if (!(epsilon > 0.0) || epsilon > std::numbers::pi) {
        throw ParameterError("tail radius must lie in (0, pi]");
    }
    const double r = std::numbers::pi / epsilon;
    return r * r / (l + 1.0);
}

double fejer_tail_sup(int l, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > std::numbers::pi) {
        throw ParameterError("tail radius must lie in (0, pi]");
    }
    const FejerKernel kernel(l);
    const double pi = std::numbers::pi;
    if (epsilon == pi) return kernel(pi);
    // F_l is even, so the tail sup is taken over [eps, pi].
    const int points = 64 * (2 * l + 1);
    const double h = (pi - epsilon) / points;
    double best = 0.0;
    int arg = 0;
    for (int i = 0; i <= points; ++i) {
        const double v = kernel(i == points ? pi : epsilon + i * h);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    double lo = std::max(epsilon, epsilon + (arg - 1) * h);
    double hi = std::min(pi, epsilon + (arg + 1) * h);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    while (hi - lo > 1e-13) {
        const double c = hi - inv_phi * (hi - lo);
        const double d = lo + inv_phi * (hi - lo);
        if (kernel(c) > kernel(d)) {
            hi = d;
        } else {
            lo = c;
        }
    }
    return std::max(best, kernel(0.5 * (lo + hi)));
}

}  // namespace linagg
