#include "linagg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "linagg/error.hpp"
#include "linagg/quadrature.hpp"

namespace linagg {

namespace {

constexpr double kRootTol = 1e-10;

struct Segment {
    double a;
    double b;
};

std::vector<Segment> smooth_segments(const Dictionary& dict) {
    const auto edges = dict.breakpoints();
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) segs.push_back({edges[i], edges[i + 1]});
    return segs;
}

template <class G>
double bisect(const G& g, double lo, double hi, double tol) {
    double g_lo = g(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if ((g_mid >= 0.0) == (g_lo >= 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Maximizes g on [lo, hi] by golden-section search.
template <class G>
std::pair<double, double> golden_max(const G& g, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    const double tol = 1e-13 * std::max(1.0, std::abs(hi) + std::abs(lo));
    while (hi - lo > tol) {
        if (gc > gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, g(x)};
}

// Grid maximum of g over a segment, refined around the best local maxima.
template <class G>
double refined_max(const G& g, const Segment& seg, int intervals) {
    const double h = (seg.b - seg.a) / intervals;
    std::vector<double> values(intervals + 1);
    for (int i = 0; i <= intervals; ++i) values[i] = g(i == intervals ? seg.b : seg.a + i * h);
    std::vector<int> peaks;
    for (int i = 0; i <= intervals; ++i) {
        const bool left = i == 0 || values[i] >= values[i - 1];
        const bool right = i == intervals || values[i] >= values[i + 1];
        if (left && right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return values[a] > values[b]; });
    if (peaks.size() > 8) peaks.resize(8);
    double best = *std::max_element(values.begin(), values.end());
    for (int i : peaks) {
        const double lo = std::max(seg.a, seg.a + (i - 1) * h);
        const double hi = std::min(seg.b, seg.a + (i + 1) * h);
        best = std::max(best, golden_max(g, lo, hi).second);
    }
    return best;
}

double fourier_value(const Eigen::VectorXd& c, double x) {
    const int l = static_cast<int>(c.size() - 1) / 2;
    double sum = c[0];
    const double c1 = std::cos(x);
    const double s1 = std::sin(x);
    double ck = c1;
    double sk = s1;
    double acc = 0.0;
    for (int k = 1; k <= l; ++k) {
        if (k % 32 == 0) {
            ck = std::cos(k * x);
            sk = std::sin(k * x);
        }
        acc += c[2 * k - 1] * ck + c[2 * k] * sk;
        const double next_c = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = next_c;
    }
    return sum + std::numbers::sqrt2 * acc;
}

}  // namespace

ModelFunction::ModelFunction(Dictionary dict, Eigen::VectorXd coeffs)
    : dict_(std::move(dict)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) throw ParameterError("model function needs at least one coefficient");
    if (coeffs_.size() != dict_.dim()) {
        throw ParameterError("coefficient length " + std::to_string(coeffs_.size()) +
                             " does not match dictionary dimension " + std::to_string(dict_.dim()));
    }
}

ModelFunction ModelFunction::basis(const Dictionary& dict, int index) {
    if (index < 0 || index >= dict.dim()) throw ParameterError("basis index out of range");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dict.dim());
    c[index] = 1.0;
    return {dict, std::move(c)};
}

ModelFunction ModelFunction::zero(const Dictionary& dict) {
    return {dict, Eigen::VectorXd::Zero(dict.dim())};
}

double ModelFunction::operator()(double x) const {
    dict_.domain().require(x);
    return value_unchecked(x);
}

double ModelFunction::value_unchecked(double x) const {
    switch (dict_.kind()) {
        case DictionaryKind::Fourier:
            return fourier_value(coeffs_, x);
        case DictionaryKind::Histogram:
            return coeffs_[dict_.cell_of(x)] * std::sqrt(static_cast<double>(dict_.dim()));
        default: {
            thread_local std::vector<double> phi;
            phi.resize(dict_.dim());
            dict_.evaluate_all_unchecked(x, phi);
            return Eigen::Map<const Eigen::VectorXd>(phi.data(), dict_.dim()).dot(coeffs_);
        }
    }
}

double evaluate(const ModelFunction& f, double x) { return f(x); }

int grid_intervals_per_segment(const Dictionary& dict) {
    if (dict.kind() == DictionaryKind::PiecewisePoly) return 64 * (dict.degree() + 1);
    return 64 * dict.dim();
}

std::vector<double> cell_values(const ModelFunction& f) {
    const Dictionary& dict = f.dictionary();
    const auto basis = cell_basis_values(dict);
    const Eigen::Map<const Eigen::MatrixXd> m(basis.data(), dict.dim(), dict.cells());
    const Eigen::VectorXd v = m.transpose() * f.coeffs();
    return {v.data(), v.data() + v.size()};
}

double sup_norm(const ModelFunction& f) {
    if (f.is_zero()) return 0.0;
    const Dictionary& dict = f.dictionary();
    if (dict.piecewise_constant()) {
        double best = 0.0;
        for (double v : cell_values(f)) best = std::max(best, std::abs(v));
        return best;
    }
    auto g = [&](double x) { return std::abs(f.value_unchecked(x)); };
    double best = 0.0;
    for (const auto& seg : smooth_segments(dict)) {
        best = std::max(best, refined_max(g, seg, grid_intervals_per_segment(dict)));
    }
    return best;
}

double lq_norm(const ModelFunction& f, double q) {
    if (!(q > 0.0)) throw ParameterError("Lq exponent must be positive");
    if (f.is_zero()) return 0.0;
    const Dictionary& dict = f.dictionary();
    if (dict.piecewise_constant()) {
        const auto vals = cell_values(f);
        double sum = 0.0;
        for (double v : vals) sum += std::pow(std::abs(v), q);
        return std::pow(sum / vals.size(), 1.0 / q);
    }
    const double length = dict.domain().length();
    const int intervals = grid_intervals_per_segment(dict);
    auto value = [&](double x) { return f.value_unchecked(x); };
    auto integrand = [&](double x) { return std::pow(std::abs(f.value_unchecked(x)), q); };
    double total = 0.0;
    for (const auto& seg : smooth_segments(dict)) {
        // split at sign changes so |f|^q is smooth on each piece
        std::vector<double> cuts{seg.a};
        const double h = (seg.b - seg.a) / intervals;
        double prev = value(seg.a);
        for (int i = 1; i <= intervals; ++i) {
            const double x = i == intervals ? seg.b : seg.a + i * h;
            const double cur = value(x);
            if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
                cuts.push_back(bisect(value, x - h, x, 1e-14));
            }
            prev = cur;
        }
        cuts.push_back(seg.b);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const double a = cuts[j];
            const double b = cuts[j + 1];
            if (b <= a) continue;
            QuadraturePolicy policy;
            policy.initial_panels = std::max(
                1, static_cast<int>(std::ceil(16.0 * dict.dim() * (b - a) / length)));
            total += integrate(integrand, a, b, policy).value;
        }
    }
    return std::pow(total / length, 1.0 / q);
}

NormReport norms(const ModelFunction& f, std::span<const double> q_list) {
    NormReport r;
    r.l2 = f.coeffs().norm();
    r.sup = sup_norm(f);
    r.l1 = lq_norm(f, 1.0);
    for (double q : q_list) r.lq[q] = lq_norm(f, q);
    const Dictionary& dict = f.dictionary();
    r.sup_exact = dict.piecewise_constant();
    if (!r.sup_exact) {
        const int intervals = grid_intervals_per_segment(dict);
        if (dict.kind() == DictionaryKind::Fourier) {
            const double h = dict.domain().length() / intervals;
            const double d = static_cast<double>(dict.dim());
            r.sup_slack = std::numbers::sqrt2 * d * d * f.coeffs().lpNorm<1>() * h / 2.0;
        } else {
            // Markov: |p'| <= 2 r^2 / width * sup on each cell
            const double width = dict.domain().length() / dict.cells();
            const double r2 = static_cast<double>(dict.degree()) * dict.degree();
            r.sup_slack = 2.0 * r2 / width * r.sup * (width / intervals) / 2.0;
        }
    }
    return r;
}

double sup_ratio_squared(const Dictionary& dict) {
    switch (dict.kind()) {
        case DictionaryKind::Histogram:
        case DictionaryKind::HaarWavelet:
            return static_cast<double>(dict.dim());
        case DictionaryKind::PiecewisePoly: {
            // sum_d (2d+1) P_d(+-1)^2 = (r+1)^2 per cell, scaled by the cell count
            const double r1 = dict.degree() + 1.0;
            return dict.cells() * r1 * r1;
        }
        case DictionaryKind::Fourier: {
            std::vector<double> phi(dict.dim());
            auto g = [&](double x) {
                dict.evaluate_all_unchecked(x, phi);
                double s = 0.0;
                for (double v : phi) s += v * v;
                return s;
            };
            const Domain& d = dict.domain();
            return refined_max(g, {d.lower(), d.upper()}, 64 * dict.dim());
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double sup_ratio(const Dictionary& dict) { return std::sqrt(sup_ratio_squared(dict)); }

double superlevel_measure(const ModelFunction& f, double threshold) {
    const Dictionary& dict = f.dictionary();
    if (dict.piecewise_constant()) {
        const auto vals = cell_values(f);
        std::size_t count = 0;
        for (double v : vals) count += std::abs(v) >= threshold ? 1 : 0;
        return static_cast<double>(count) / static_cast<double>(vals.size());
    }
    auto h = [&](double x) { return std::abs(f.value_unchecked(x)) - threshold; };
    const int intervals = grid_intervals_per_segment(dict);
    double measure = 0.0;
    for (const auto& seg : smooth_segments(dict)) {
        const double step = (seg.b - seg.a) / intervals;
        double x0 = seg.a;
        double h0 = h(x0);
        for (int i = 1; i <= intervals; ++i) {
            const double x1 = i == intervals ? seg.b : seg.a + i * step;
            const double h1 = h(x1);
            const bool in0 = h0 >= 0.0;
            const bool in1 = h1 >= 0.0;
            if (in0 && in1) {
                measure += x1 - x0;
            } else if (in0 != in1) {
                const double root = bisect(h, x0, x1, kRootTol);
                measure += in0 ? root - x0 : x1 - root;
            }
            x0 = x1;
            h0 = h1;
        }
    }
    return std::clamp(measure / dict.domain().length(), 0.0, 1.0);
}

double support_measure(const ModelFunction& f) {
    if (f.is_zero()) return 0.0;
    const Dictionary& dict = f.dictionary();
    if (dict.piecewise_constant()) {
        const auto vals = cell_values(f);
        double scale = 0.0;
        for (double v : vals) scale = std::max(scale, std::abs(v));
        std::size_t count = 0;
        for (double v : vals) count += std::abs(v) > 1e-14 * scale ? 1 : 0;
        return static_cast<double>(count) / static_cast<double>(vals.size());
    }
    if (dict.kind() == DictionaryKind::PiecewisePoly) {
        const int block = dict.degree() + 1;
        int nonzero = 0;
        for (int c = 0; c < dict.cells(); ++c) {
            nonzero += f.coeffs().segment(c * block, block).isZero(0.0) ? 0 : 1;
        }
        return static_cast<double>(nonzero) / dict.cells();
    }
    // a nonzero trigonometric polynomial vanishes on a finite set
    return 1.0;
}

}  // namespace linagg
