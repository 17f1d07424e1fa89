#pragma once

#include <span>
#include <string>
#include <vector>

#include "linagg/domain.hpp"

namespace linagg {

enum class DictionaryKind { Fourier, Histogram, PiecewisePoly, HaarWavelet };

std::string to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(const std::string& name);

/// User-facing description of a dictionary; see make_dictionary().
struct DictionarySpec {
    DictionaryKind kind = DictionaryKind::Fourier;
    int dim = 0;      // D; for HaarWavelet either dim or level
    int level = -2;   // HaarWavelet resolution l (D = 2^(l+1)); -2 = derive from dim
    int degree = 0;   // PiecewisePoly max degree r
    Domain domain = Domain::zero_two_pi();
};

/// Orthonormal family under the uniform design on its domain.
///
/// Basis ordering (0-based index i):
///  - Fourier: i=0 is 1, i=2k-1 is sqrt2 cos(kx), i=2k is sqrt2 sin(kx).
///  - Histogram: i is sqrt(D) 1_{[i/D,(i+1)/D)}.
///  - PiecewisePoly: i = cell*(r+1)+d is the degree-d Legendre polynomial
///    shifted to the cell and scaled to unit norm.
///  - HaarWavelet: i=0 is the father 1, i=2^j+k-1 is psi_{j,k}, j=0..l, k=1..2^j.
/// Piecewise kinds are constant/polynomial on a regular grid of cells(); the
/// last cell is closed on the right.
class Dictionary {
  public:
    static Dictionary fourier(int dim, Domain domain = Domain::zero_two_pi());
    static Dictionary histogram(int dim);
    static Dictionary piecewise_poly(int pieces, int degree);
    static Dictionary haar(int level);

    DictionaryKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    const Domain& domain() const noexcept { return domain_; }
    int degree() const noexcept { return degree_; }
    int level() const noexcept { return level_; }
    /// Number of regular cells for piecewise kinds, 1 for Fourier.
    int cells() const noexcept { return cells_; }
    /// Highest frequency l of a Fourier dictionary (D = 2l + 1).
    int max_frequency() const noexcept { return (dim_ - 1) / 2; }

    bool piecewise_constant() const noexcept {
        return kind_ == DictionaryKind::Histogram || kind_ == DictionaryKind::HaarWavelet ||
               (kind_ == DictionaryKind::PiecewisePoly && degree_ == 0);
    }
    /// True when the span contains the constant functions.
    bool contains_constants() const noexcept { return true; }

    /// Writes phi_0(x) .. phi_{D-1}(x) into out (size D). Throws DomainError.
    void evaluate_all(double x, std::span<double> out) const;
    /// Same as evaluate_all without the domain check.
    void evaluate_all_unchecked(double x, std::span<double> out) const;
    double evaluate(int index, double x) const;

    /// Cell index of x for piecewise kinds.
    int cell_of(double x) const noexcept;
    /// Edges of the smooth pieces: {lower, upper} for Fourier, the cell grid otherwise.
    std::vector<double> breakpoints() const;

    std::string label() const;
    DictionarySpec spec() const;

    friend bool operator==(const Dictionary&, const Dictionary&) = default;

  private:
    Dictionary(DictionaryKind kind, int dim, Domain domain, int degree, int level, int cells);

    DictionaryKind kind_;
    int dim_;
    Domain domain_;
    int degree_;
    int level_;
    int cells_;
};

/// Validates a spec and builds the dictionary. Throws ParameterError for even
/// Fourier dimensions, Haar dimensions that are not powers of two, and
/// PiecewisePoly dimensions not divisible by degree+1.
Dictionary make_dictionary(const DictionarySpec& spec);

/// Same family with a new dimension (level for Haar is derived).
Dictionary with_dimension(const Dictionary& dict, int dim);

/// Self-test: max |G - I| over the Gram matrix under the uniform design.
/// Exact cell arithmetic for piecewise kinds, composite quadrature for Fourier.
double gram_identity_defect(const Dictionary& dict);

/// Values of all basis functions on each cell (cells() x D), for piecewise
/// constant dictionaries.
std::vector<double> cell_basis_values(const Dictionary& dict);

}  // namespace linagg
