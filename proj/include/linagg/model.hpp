#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

#include "linagg/dictionary.hpp"

namespace linagg {

/// Element of span(dictionary), stored by its orthonormal coefficients.
class ModelFunction {
  public:
    /// Throws ParameterError when coeffs.size() != dict.dim().
    ModelFunction(Dictionary dict, Eigen::VectorXd coeffs);

    static ModelFunction basis(const Dictionary& dict, int index);
    static ModelFunction zero(const Dictionary& dict);

    const Dictionary& dictionary() const noexcept { return dict_; }
    const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
    int dim() const noexcept { return dict_.dim(); }
    bool is_zero() const noexcept { return coeffs_.isZero(0.0); }

    /// f(x); throws DomainError outside the domain.
    double operator()(double x) const;
    double value_unchecked(double x) const;

  private:
    Dictionary dict_;
    Eigen::VectorXd coeffs_;
};

double evaluate(const ModelFunction& f, double x);

struct NormReport {
    double l2 = 0.0;
    double sup = 0.0;
    double l1 = 0.0;
    std::map<double, double> lq;
    /// sup is exact (piecewise constant) or a grid+refinement lower bound.
    bool sup_exact = true;
    /// Upper bound on (true sup - reported sup) from a derivative bound.
    double sup_slack = 0.0;
};

/// L2 from Parseval; sup, L1 and Lq by exact cell arithmetic (piecewise
/// constant) or root-split composite Gauss-Legendre and grid refinement.
NormReport norms(const ModelFunction& f, std::span<const double> q_list = {});

double sup_norm(const ModelFunction& f);
double lq_norm(const ModelFunction& f, double q);

/// sup_x sum_k phi_k(x)^2, i.e. R_m^2.
double sup_ratio_squared(const Dictionary& dict);
/// R_m = sup_{s != 0} ||s||_inf / ||s||_2.
double sup_ratio(const Dictionary& dict);

/// Probability under the uniform design that |f(X)| >= threshold.
/// Exact for piecewise-constant f; otherwise sign-change bracketing on a
/// 64*D point grid refined by bisection to 1e-10.
double superlevel_measure(const ModelFunction& f, double threshold);

/// P(f(X) != 0).
double support_measure(const ModelFunction& f);

/// Values on each regular cell, for piecewise-constant dictionaries.
std::vector<double> cell_values(const ModelFunction& f);

/// Grid resolution used by the smooth-function routines (points per segment).
int grid_intervals_per_segment(const Dictionary& dict);

}  // namespace linagg
