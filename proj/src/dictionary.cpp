#include "linagg/dictionary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "linagg/error.hpp"
#include "linagg/quadrature.hpp"

namespace linagg {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
    int l = 0;
    while ((1 << l) < v) ++l;
    return l;
}

// Orthonormal Legendre values sqrt(2d+1) P_d(t), d = 0..degree.
void legendre_normalized(double t, int degree, std::span<double> out) {
    double p_prev = 0.0;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
        out[d] = std::sqrt(2.0 * d + 1.0) * p;
        const double p_next = ((2.0 * d + 1.0) * t * p - d * p_prev) / (d + 1.0);
        p_prev = p;
        p = p_next;
    }
}

}  // namespace

std::string to_string(DictionaryKind kind) {
    switch (kind) {
        case DictionaryKind::Fourier: return "fourier";
        case DictionaryKind::Histogram: return "histogram";
        case DictionaryKind::PiecewisePoly: return "piecewise_poly";
        case DictionaryKind::HaarWavelet: return "haar";
    }
    return "unknown";
}

DictionaryKind parse_dictionary_kind(const std::string& name) {
    if (name == "fourier") return DictionaryKind::Fourier;
    if (name == "histogram") return DictionaryKind::Histogram;
    if (name == "piecewise_poly") return DictionaryKind::PiecewisePoly;
    if (name == "haar") return DictionaryKind::HaarWavelet;
    throw ParameterError("unknown dictionary kind '" + name +
                         "' (expected fourier, histogram, piecewise_poly or haar)");
}

Dictionary::Dictionary(DictionaryKind kind, int dim, Domain domain, int degree, int level,
                       int cells)
    : kind_(kind), dim_(dim), domain_(domain), degree_(degree), level_(level), cells_(cells) {}

Dictionary Dictionary::fourier(int dim, Domain domain) {
    if (dim < 1 || dim % 2 == 0) throw ParameterError("Fourier dimension must be odd");
    if (!domain.is_periodic_2pi()) {
        throw ParameterError("Fourier dictionary requires domain [0,2pi] or [-pi,pi]");
    }
    return {DictionaryKind::Fourier, dim, domain, 0, -2, 1};
}

Dictionary Dictionary::histogram(int dim) {
    if (dim < 1) throw ParameterError("histogram dimension must be positive");
    return {DictionaryKind::Histogram, dim, Domain::unit(), 0, -2, dim};
}

Dictionary Dictionary::piecewise_poly(int pieces, int degree) {
    if (pieces < 1) throw ParameterError("piecewise polynomial needs at least one piece");
    if (degree < 0) throw ParameterError("piecewise polynomial degree must be nonnegative");
    return {DictionaryKind::PiecewisePoly, pieces * (degree + 1), Domain::unit(), degree, -2,
            pieces};
}

Dictionary Dictionary::haar(int level) {
    if (level < -1 || level > 24) throw ParameterError("Haar level must be in [-1, 24]");
    const int dim = 1 << (level + 1);
    return {DictionaryKind::HaarWavelet, dim, Domain::unit(), 0, level, dim};
}

Dictionary make_dictionary(const DictionarySpec& spec) {
    switch (spec.kind) {
        case DictionaryKind::Fourier:
            return Dictionary::fourier(spec.dim, spec.domain);
        case DictionaryKind::Histogram:
            if (spec.domain != Domain::unit()) throw ParameterError("histogram domain must be [0,1]");
            return Dictionary::histogram(spec.dim);
        case DictionaryKind::PiecewisePoly: {
            if (spec.domain != Domain::unit()) {
                throw ParameterError("piecewise polynomial domain must be [0,1]");
            }
            if (spec.degree < 0) throw ParameterError("piecewise polynomial degree must be nonnegative");
            if (spec.dim < 1 || spec.dim % (spec.degree + 1) != 0) {
                throw ParameterError("piecewise polynomial dimension must be a positive multiple of degree+1");
            }
            return Dictionary::piecewise_poly(spec.dim / (spec.degree + 1), spec.degree);
        }
        case DictionaryKind::HaarWavelet: {
            if (spec.domain != Domain::unit()) throw ParameterError("Haar domain must be [0,1]");
            if (spec.level != -2) {
                const Dictionary d = Dictionary::haar(spec.level);
                if (spec.dim != 0 && spec.dim != d.dim()) {
                    throw ParameterError("Haar dimension must equal 2^(level+1)");
                }
                return d;
            }
            if (!is_power_of_two(spec.dim)) {
                throw ParameterError("Haar dimension must be a power of two");
            }
            return Dictionary::haar(log2_exact(spec.dim) - 1);
        }
    }
    throw ParameterError("unknown dictionary kind");
}

Dictionary with_dimension(const Dictionary& dict, int dim) {
    DictionarySpec spec = dict.spec();
    spec.dim = dim;
    spec.level = -2;
    return make_dictionary(spec);
}

DictionarySpec Dictionary::spec() const {
    DictionarySpec s;
    s.kind = kind_;
    s.dim = dim_;
    s.level = kind_ == DictionaryKind::HaarWavelet ? level_ : -2;
    s.degree = degree_;
    s.domain = domain_;
    return s;
}

int Dictionary::cell_of(double x) const noexcept {
    const double u = domain_.to_unit(x);
    const int c = static_cast<int>(std::floor(u * cells_));
    return std::clamp(c, 0, cells_ - 1);
}

void Dictionary::evaluate_all(double x, std::span<double> out) const {
    domain_.require(x);
    evaluate_all_unchecked(x, out);
}

void Dictionary::evaluate_all_unchecked(double x, std::span<double> out) const {
    switch (kind_) {
        case DictionaryKind::Fourier: {
            out[0] = 1.0;
            const int l = max_frequency();
            const double c1 = std::cos(x);
            const double s1 = std::sin(x);
            double ck = c1;
            double sk = s1;
            for (int k = 1; k <= l; ++k) {
                if (k % 32 == 0) {
                    ck = std::cos(k * x);
                    sk = std::sin(k * x);
                }
                out[2 * k - 1] = kSqrt2 * ck;
                out[2 * k] = kSqrt2 * sk;
                const double next_c = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = next_c;
            }
            return;
        }
        case DictionaryKind::Histogram: {
            std::fill(out.begin(), out.end(), 0.0);
            out[cell_of(x)] = std::sqrt(static_cast<double>(dim_));
            return;
        }
        case DictionaryKind::PiecewisePoly: {
            std::fill(out.begin(), out.end(), 0.0);
            const int cell = cell_of(x);
            const double t = 2.0 * (domain_.to_unit(x) * cells_ - cell) - 1.0;
            auto block = out.subspan(static_cast<std::size_t>(cell) * (degree_ + 1), degree_ + 1);
            legendre_normalized(std::clamp(t, -1.0, 1.0), degree_, block);
            const double scale = std::sqrt(static_cast<double>(cells_));
            for (double& v : block) v *= scale;
            return;
        }
        case DictionaryKind::HaarWavelet: {
            std::fill(out.begin(), out.end(), 0.0);
            out[0] = 1.0;
            const int cell = cell_of(x);
            for (int j = 0; j <= level_; ++j) {
                const int shift = level_ + 1 - j;
                const int k0 = cell >> shift;
                const bool right_half = ((cell >> (shift - 1)) & 1) != 0;
                out[(1 << j) + k0] = (right_half ? -1.0 : 1.0) * std::sqrt(std::ldexp(1.0, j));
            }
            return;
        }
    }
}

double Dictionary::evaluate(int index, double x) const {
    if (index < 0 || index >= dim_) throw ParameterError("basis index out of range");
    std::vector<double> values(dim_);
    evaluate_all(x, values);
    return values[index];
}

std::vector<double> Dictionary::breakpoints() const {
    std::vector<double> edges;
    edges.reserve(cells_ + 1);
    for (int c = 0; c <= cells_; ++c) {
        edges.push_back(c == cells_ ? domain_.upper()
                                    : domain_.from_unit(static_cast<double>(c) / cells_));
    }
    return edges;
}

std::string Dictionary::label() const {
    std::string s = to_string(kind_) + "(D=" + std::to_string(dim_);
    if (kind_ == DictionaryKind::PiecewisePoly) s += ",r=" + std::to_string(degree_);
    if (kind_ == DictionaryKind::HaarWavelet) s += ",l=" + std::to_string(level_);
    s += "," + domain_.name() + ")";
    return s;
}

std::vector<double> cell_basis_values(const Dictionary& dict) {
    if (!dict.piecewise_constant()) {
        throw UnsupportedError("cell values require a piecewise-constant dictionary");
    }
    const int cells = dict.cells();
    const int dim = dict.dim();
    std::vector<double> values(static_cast<std::size_t>(cells) * dim);
    for (int c = 0; c < cells; ++c) {
        const double mid = dict.domain().from_unit((c + 0.5) / cells);
        dict.evaluate_all_unchecked(mid, std::span(values).subspan(static_cast<std::size_t>(c) * dim, dim));
    }
    return values;
}

double gram_identity_defect(const Dictionary& dict) {
    const int dim = dict.dim();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
    if (dict.piecewise_constant()) {
        const auto values = cell_basis_values(dict);
        const Eigen::Map<const Eigen::MatrixXd> cells(values.data(), dim, dict.cells());
        gram = cells * cells.transpose() / dict.cells();
    } else if (dict.kind() == DictionaryKind::PiecewisePoly) {
        // Per-cell Gauss-Legendre is exact for the degree-2r products.
        const auto& rule = GaussLegendre::rule64();
        Eigen::VectorXd phi(dim);
        const auto edges = dict.breakpoints();
        for (int c = 0; c < dict.cells(); ++c) {
            const double a = edges[c];
            const double b = edges[c + 1];
            for (int i = 0; i < rule.size(); ++i) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes()[i];
                dict.evaluate_all_unchecked(x, std::span(phi.data(), dim));
                gram += (0.5 * (b - a) * rule.weights()[i]) * phi * phi.transpose();
            }
        }
        gram /= dict.domain().length();
    } else {
        QuadraturePolicy policy;
        policy.initial_panels = 16 * dim;
        Eigen::VectorXd phi(dim);
        auto integrand = [&](double x) -> Eigen::MatrixXd {
            dict.evaluate_all_unchecked(x, std::span(phi.data(), dim));
            return phi * phi.transpose();
        };
        const auto& d = dict.domain();
        gram = integrate_or_throw(integrand, d.lower(), d.upper(), policy, "Gram matrix").value /
               d.length();
    }
    return (gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

}  // namespace linagg
