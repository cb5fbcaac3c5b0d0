#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "csbi/polynomial.hpp"
#include "generators.hpp"

using namespace csbi;

namespace {

// Match two root multisets within tol, order-free.
bool roots_match(std::vector<Complex> got, std::vector<Complex> want, double tol) {
    if (got.size() != want.size()) return false;
    for (const Complex& w : want) {
        auto it = std::min_element(got.begin(), got.end(), [&](Complex a, Complex b) {
            return std::abs(a - w) < std::abs(b - w);
        });
        if (it == got.end() || std::abs(*it - w) > tol) return false;
        got.erase(it);
    }
    return true;
}

}  // namespace

TEST_CASE("poly_from_roots expands real roots") {
    const std::vector<Complex> roots{-1.0, -2.0};
    const Poly p = poly_from_roots(roots, 2.0);
    CHECK(p.coeffs == std::vector<double>{4.0, 6.0, 2.0});  // 2(x+1)(x+2)
}

TEST_CASE("poly_from_roots expands conjugate pairs with real coefficients") {
    const std::vector<Complex> roots{{1.0, 2.0}, {1.0, -2.0}};
    const Poly p = poly_from_roots(roots, 1.0);
    CHECK(p.coeffs == std::vector<double>{5.0, -2.0, 1.0});  // x^2 - 2x + 5
}

TEST_CASE("poly_from_roots rejects a conjugation-violating root set") {
    const std::vector<Complex> roots{{1.0, 2.0}, {1.0, -1.0}};
    CHECK_THROWS_AS(poly_from_roots(roots, 1.0), ConjugationViolation);
}

TEST_CASE("empty root set gives the constant leading coefficient") {
    const Poly p = poly_from_roots({}, 3.5);
    CHECK(p.coeffs == std::vector<double>{3.5});
}

TEST_CASE("poly arithmetic basics") {
    const Poly a({1.0, 1.0});        // 1 + x
    const Poly b({-2.0, 0.0, 1.0});  // x^2 - 2
    CHECK(poly_mul(a, b).coeffs == std::vector<double>{-2.0, -2.0, 1.0, 1.0});
    CHECK(poly_add(a, b).coeffs == std::vector<double>{-1.0, 1.0, 1.0});
    CHECK(poly_derivative(b).coeffs == std::vector<double>{0.0, 2.0});
    CHECK(poly_eval(b, Complex(3.0, 0.0)) == Complex(7.0, 0.0));
}

TEST_CASE("normalization strips trailing coefficients below the relative floor") {
    const Poly p({1.0, 2.0, 1e-30});
    CHECK(p.degree() == 1);
    CHECK(Poly({0.0, 0.0}).is_zero());
}

TEST_CASE("addition cancelling the top term reduces the degree") {
    const Poly a({0.0, 0.0, 1.0});
    const Poly b({1.0, 0.0, -1.0});
    CHECK(poly_add(a, b).coeffs == std::vector<double>{1.0});
}

TEST_CASE("roots of a cubic with known integer roots") {
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    const RootSet rs = poly_roots(Poly({-6.0, 11.0, -6.0, 1.0}));
    CHECK(roots_match(rs.roots, {1.0, 2.0, 3.0}, 1e-9));
}

TEST_CASE("complex roots come in exact conjugate pairs") {
    // (x^2+1)(x^2+2x+5)
    const Poly p = poly_mul(Poly({1.0, 0.0, 1.0}), Poly({5.0, 2.0, 1.0}));
    const RootSet rs = poly_roots(p);
    REQUIRE(rs.roots.size() == 4);
    for (const Complex& r : rs.roots) {
        if (r.imag() == 0.0) continue;
        const bool paired = std::any_of(rs.roots.begin(), rs.roots.end(),
                                        [&](Complex o) { return o == std::conj(r); });
        CHECK(paired);
    }
    CHECK(roots_match(rs.roots, {{0, 1}, {0, -1}, {-1, 2}, {-1, -2}}, 1e-9));
}

TEST_CASE("repeated roots set the close_roots flag") {
    // (x-1)^2 (x+2)
    const Poly p = poly_mul(poly_mul(Poly({-1.0, 1.0}), Poly({-1.0, 1.0})), Poly({2.0, 1.0}));
    const RootSet rs = poly_roots(p);
    CHECK(rs.close_roots);
    CHECK(roots_match(rs.roots, {1.0, 1.0, -2.0}, 1e-5));
}

TEST_CASE("roots at the origin are recovered exactly") {
    // x^2 (x+3)
    const RootSet rs = poly_roots(Poly({0.0, 0.0, 3.0, 1.0}));
    CHECK(roots_match(rs.roots, {0.0, 0.0, -3.0}, 1e-12));
}

TEST_CASE("degree-one polynomial") {
    const RootSet rs = poly_roots(Poly({4.0, 2.0}));
    CHECK(roots_match(rs.roots, {-2.0}, 1e-14));
}

TEST_CASE("round trip: random roots -> coefficients -> roots") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const std::vector<Complex> roots = testgen::random_roots(rng, n, 4.0);
        const double lead = testgen::uniform(rng, 0.2, 3.0) * (rng() % 2 ? 1.0 : -1.0);
        const Poly p = poly_from_roots(roots, lead);
        const RootSet rs = poly_roots(p);
        CAPTURE(trial);
        CHECK(roots_match(rs.roots, roots, 1e-6));
    }
}

TEST_CASE("property: eval distributes over multiplication") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> ca(1 + rng() % 5), cb(1 + rng() % 5);
        for (double& c : ca) c = testgen::uniform(rng, -2.0, 2.0);
        for (double& c : cb) c = testgen::uniform(rng, -2.0, 2.0);
        const Poly a(ca), b(cb);
        const Complex x(testgen::uniform(rng, -3.0, 3.0), testgen::uniform(rng, -3.0, 3.0));
        const Complex lhs = poly_eval(poly_mul(a, b), x);
        const Complex rhs = poly_eval(a, x) * poly_eval(b, x);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("property: derivative is linear") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ca(2 + rng() % 5), cb(2 + rng() % 5);
        for (double& c : ca) c = testgen::uniform(rng, -2.0, 2.0);
        for (double& c : cb) c = testgen::uniform(rng, -2.0, 2.0);
        const Poly a(ca), b(cb);
        const Poly lhs = poly_derivative(poly_add(a, b));
        const Poly rhs = poly_add(poly_derivative(a), poly_derivative(b));
        REQUIRE(lhs.coeffs.size() == rhs.coeffs.size());
        for (size_t k = 0; k < lhs.coeffs.size(); ++k)
            CHECK(lhs.coeffs[k] == doctest::Approx(rhs.coeffs[k]).epsilon(1e-12));
    }
}

TEST_CASE("property: residual bound is reported and small for well-separated roots") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const std::vector<Complex> roots = testgen::random_roots(rng, n, 3.0, 0.3);
        const RootSet rs = poly_roots(poly_from_roots(roots, 1.0));
        CHECK(rs.residual_bound >= 0.0);
        CHECK(std::isfinite(rs.residual_bound));
        // Monic, roots within |r| <= 3: backward error stays tiny.
        CHECK(rs.residual_bound <= 1e-6 * std::pow(4.0, n));
    }
}
