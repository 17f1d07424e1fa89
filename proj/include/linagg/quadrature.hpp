#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "linagg/error.hpp"

namespace linagg {

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
  public:
    explicit GaussLegendre(int n);

    /// Shared 64-point rule used by the composite policy.
    static const GaussLegendre& rule64();

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Composite Gauss-Legendre with panel doubling.
struct QuadraturePolicy {
    int initial_panels = 16;
    double rel_tol = 1e-10;
    /// Absolute floor for integrals that vanish up to rounding.
    double abs_tol = 1e-14;
    std::size_t max_nodes = std::size_t{1} << 20;
};

template <class T>
struct QuadratureResult {
    T value;
    int panels = 0;
    std::size_t nodes = 0;
    bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}
inline double zero_like(double) { return 0.0; }
template <class Derived>
typename Derived::PlainObject zero_like(const Eigen::MatrixBase<Derived>& v) {
    return Derived::PlainObject::Zero(v.rows(), v.cols());
}

template <class F>
auto composite(const F& f, double a, double b, int panels, double& scale) {
    const auto& rule = GaussLegendre::rule64();
    const double h = (b - a) / panels;
    auto first = f(a + 0.5 * h);
    auto sum = zero_like(first);
    scale = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < rule.size(); ++i) {
            const double w = 0.5 * h * rule.weights()[i];
            auto v = f(mid + 0.5 * h * rule.nodes()[i]);
            scale += w * magnitude(v);
            sum += w * v;
        }
    }
    return sum;
}

}  // namespace detail

/// Integrates f over [a, b]. f may return double or an Eigen vector/matrix.
/// Panels double until successive estimates agree to rel_tol (relative to the
/// integral of |f|) or to abs_tol, or the node cap is reached.
template <class F>
auto integrate(const F& f, double a, double b, const QuadraturePolicy& policy = {})
    -> QuadratureResult<decltype(detail::composite(f, a, b, 1, std::declval<double&>()))> {
    using Value = decltype(detail::composite(f, a, b, 1, std::declval<double&>()));
    const std::size_t per_panel = static_cast<std::size_t>(GaussLegendre::rule64().size());
    int panels = policy.initial_panels < 1 ? 1 : policy.initial_panels;
    double scale = 0.0;
    Value previous = detail::composite(f, a, b, panels, scale);
    std::size_t used = per_panel * static_cast<std::size_t>(panels);
    while (per_panel * static_cast<std::size_t>(panels) * 2 <= policy.max_nodes) {
        panels *= 2;
        double next_scale = 0.0;
        Value next = detail::composite(f, a, b, panels, next_scale);
        used += per_panel * static_cast<std::size_t>(panels);
        const double diff = detail::magnitude(next - previous);
        const bool done = diff <= policy.rel_tol * next_scale || diff <= policy.abs_tol;
        previous = std::move(next);
        if (done) return {std::move(previous), panels, used, true};
    }
    return {std::move(previous), panels, used, false};
}

/// As integrate(), but throws NumericError when the tolerance is not met.
template <class F>
auto integrate_or_throw(const F& f, double a, double b, const QuadraturePolicy& policy,
                        const std::string& what) {
    auto result = integrate(f, a, b, policy);
    if (!result.converged) {
        throw NumericError("quadrature did not converge for " + what + " on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "] after " +
                           std::to_string(result.nodes) + " nodes");
    }
    return result;
}

}  // namespace linagg
