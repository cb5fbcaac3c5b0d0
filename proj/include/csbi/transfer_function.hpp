#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csbi/polynomial.hpp"

namespace csbi {

enum class Domain { Continuous, Discrete };

/// Factored open-loop transfer function
///   L(s) = gain * prod(s - z_i) / (s^integrator_count * prod(s - p_i))
/// with both root products monic. For the discrete domain the variable is z
/// and integrator_count is always 0 (origin poles stay in finite_poles).
struct LoopTF {
    Domain domain = Domain::Continuous;
    double gain = 1.0;
    std::vector<Complex> zeros;
    std::vector<Complex> finite_poles;
    int integrator_count = 0;
};

/// Complementary sensitivity T = L/(1+L) in factored form plus the exact
/// expanded numerator/denominator polynomials.
struct ClosedLoop {
    Domain domain = Domain::Continuous;
    double gain = 0.0;  // leading(num_poly) / leading(den_poly)
    std::vector<Complex> zeros;
    std::vector<Complex> poles;
    Poly num_poly;
    Poly den_poly;
    /// Continuous, relative degree 0, gain -1: the top coefficient of the
    /// closed-loop denominator cancels and its degree drops.
    bool degenerate_leading = false;
};

struct ZeroClassification {
    std::vector<Complex> nmp;       // non-minimum phase / strictly unstable
    std::vector<Complex> mp;        // minimum phase
    std::vector<Complex> boundary;  // on the stability boundary within tol
};

struct SyntaxError : std::runtime_error {
    size_t position;
    SyntaxError(const std::string& what, size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct MixedVariables : std::runtime_error { using std::runtime_error::runtime_error; };
struct OriginZero : std::runtime_error { using std::runtime_error::runtime_error; };
struct ImproperTF : std::runtime_error { using std::runtime_error::runtime_error; };
struct NonCausalClosedLoop : std::runtime_error { using std::runtime_error::runtime_error; };

/// Parse the zpk grammar; variable 's' selects Continuous, 'z' Discrete.
LoopTF parse_tf(const std::string& text);

/// Canonical zpk text that parse_tf maps back to an equal LoopTF.
std::string format_tf(const LoopTF& L);

int relative_degree(const LoopTF& L);

ClosedLoop close_loop(const LoopTF& L);

ZeroClassification classify_zeros(const LoopTF& L, double tol = 1e-9);

/// Zero/pole pairs with |z - p| <= tol, greedily matched. L is not modified.
std::vector<std::pair<Complex, Complex>> detect_cancellations(const LoopTF& L, double tol = 1e-7);

/// Copy of L with the detected pairs removed.
LoopTF cancel_pairs(const LoopTF& L, double tol = 1e-7);

}  // namespace csbi
