#pragma once

#include "linagg/model.hpp"

namespace linagg {

/// Fejer kernel of order l in coefficient form,
/// F_l(t) = sum_{|k| <= l-1} (1 - |k|/l) e^{ikt}, so F_l(0) = l and ||F_l||_1 = 1.
class FejerKernel {
  public:
    /// Throws ParameterError for l < 1.
    explicit FejerKernel(int l);

    int order() const noexcept { return l_; }
    /// Parent Fourier dimension 2l+1.
    int dim() const noexcept { return 2 * l_ + 1; }

    /// Real coefficients in the Fourier dictionary of dimension 2l+1 on [-pi, pi]:
    /// 1 on the constant, sqrt2 (1 - k/l) on cos(kx), 0 on the sines.
    ModelFunction as_model_function(Domain domain = Domain::minus_pi_pi()) const;

    /// Closed form sin^2(l t/2) / (l sin^2(t/2)), with F_l(0) = l.
    double operator()(double t) const;

    /// 1 + (2/l^2) sum_{j=1}^{l-1} j^2.
    double l2_norm_squared() const;

  private:
    int l_;
};

ModelFunction fejer_as_model_function(int l, Domain domain = Domain::minus_pi_pi());

/// (1/(l+1)) (pi/eps)^2. Throws ParameterError unless 0 < eps <= pi.
double fejer_tail_bound(int l, double epsilon);

/// max of F_l over eps <= |t| <= pi on a grid refined by golden section.
double fejer_tail_sup(int l, double epsilon);

}  // namespace linagg
