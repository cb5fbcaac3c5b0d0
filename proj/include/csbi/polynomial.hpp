#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace csbi {

using Complex = std::complex<double>;

/// Real-coefficient univariate polynomial, coeffs[k] multiplies x^k.
/// The zero polynomial is stored as {0}; otherwise the last stored
/// coefficient is nonzero.
struct Poly {
    std::vector<double> coeffs{0.0};

    Poly() = default;
    explicit Poly(std::vector<double> c);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.size() == 1 && coeffs[0] == 0.0; }
    double leading() const { return coeffs.back(); }

    bool operator==(const Poly&) const = default;
};

struct RootSet {
    std::vector<Complex> roots;
    /// max |p(root)| over the monic-scaled polynomial.
    double residual_bound = 0.0;
    /// Two roots within 1e-7 of each other; multiplicity suspected.
    bool close_roots = false;
};

struct ConjugationViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expand leading * prod(x - r_i). Roots must be closed under conjugation
/// (relative tolerance 1e-9); throws ConjugationViolation otherwise.
Poly poly_from_roots(std::span<const Complex> roots, double leading);

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Complex poly_eval(const Poly& p, Complex x);
Poly poly_derivative(const Poly& p);

/// All complex roots (with multiplicity) via Aberth-Ehrlich iteration with a
/// Newton polish; conjugate symmetry is restored by pairing-and-averaging.
/// Requires degree >= 1.
RootSet poly_roots(const Poly& p);

}  // namespace csbi
