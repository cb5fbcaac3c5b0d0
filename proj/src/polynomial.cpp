#include "csbi/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csbi {

namespace {

// Strip high-order float noise: trailing |c| <= 1e-12 * max|c|.
std::vector<double> normalized(std::vector<double> c) {
    if (c.empty()) return {0.0};
    double maxc = 0.0;
    for (double v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0.0) return {0.0};
    const double cut = 1e-12 * maxc;
    while (c.size() > 1 && std::abs(c.back()) <= cut) c.pop_back();
    if (c.size() == 1 && std::abs(c[0]) <= cut) c[0] = 0.0;
    return c;
}

bool nearly_real(Complex r) {
    return std::abs(r.imag()) <= 1e-9 * (std::abs(r) + 1.0);
}

}  // namespace

Poly::Poly(std::vector<double> c) : coeffs(normalized(std::move(c))) {
    for (double v : coeffs) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite polynomial coefficient");
    }
}

Poly poly_from_roots(std::span<const Complex> roots, double leading) {
    if (leading == 0.0) throw std::invalid_argument("poly_from_roots: leading coefficient is zero");
    std::vector<double> acc{leading};
    std::vector<bool> used(roots.size(), false);
    auto mul_in = [&acc](std::span<const double> f) {
        std::vector<double> out(acc.size() + f.size() - 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < f.size(); ++j) out[i + j] += acc[i] * f[j];
        acc = std::move(out);
    };
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const Complex r = roots[i];
        if (nearly_real(r)) {
            used[i] = true;
            const double lin[2] = {-r.real(), 1.0};
            mul_in(lin);
            continue;
        }
        // Find the conjugate partner and expand the quadratic exactly.
        size_t best = roots.size();
        double best_d = std::numeric_limits<double>::max();
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(r - std::conj(roots[j]));
            if (d < best_d) { best_d = d; best = j; }
        }
        if (best == roots.size() || best_d > 1e-9 * (std::abs(r) + 1.0))
            throw ConjugationViolation("root has no conjugate partner within tolerance");
        used[i] = used[best] = true;
        const Complex a = 0.5 * (r + std::conj(roots[best]));
        const double quad[3] = {std::norm(a), -2.0 * a.real(), 1.0};
        mul_in(quad);
    }
    return Poly(std::move(acc));
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    std::vector<double> out(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j) out[i + j] += a.coeffs[i] * b.coeffs[j];
    return Poly(std::move(out));
}

Poly poly_add(const Poly& a, const Poly& b) {
    std::vector<double> out(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) out[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) out[i] += b.coeffs[i];
    return Poly(std::move(out));
}

Complex poly_eval(const Poly& p, Complex x) {
    Complex acc = 0.0;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly poly_derivative(const Poly& p) {
    if (p.degree() == 0) return Poly{};
    std::vector<double> out(p.coeffs.size() - 1);
    for (size_t k = 1; k < p.coeffs.size(); ++k) out[k - 1] = p.coeffs[k] * static_cast<double>(k);
    return Poly(std::move(out));
}

namespace {

Complex eval_monic(std::span<const double> c, Complex x) {
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Backward-error style scale for the residual at x: sum |c_k| |x|^k.
double residual_scale(std::span<const double> c, Complex x) {
    double acc = 0.0, pw = 1.0;
    const double ax = std::abs(x);
    for (double v : c) { acc += std::abs(v) * pw; pw *= ax; }
    return std::max(acc, 1.0);
}

void enforce_conjugate_pairs(std::vector<Complex>& roots) {
    std::vector<bool> done(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (done[i]) continue;
        if (nearly_real(roots[i])) {
            roots[i] = Complex(roots[i].real(), 0.0);
            done[i] = true;
            continue;
        }
        size_t best = roots.size();
        double best_d = std::numeric_limits<double>::max();
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (done[j]) continue;
            const double d = std::abs(roots[i] - std::conj(roots[j]));
            if (d < best_d) { best_d = d; best = j; }
        }
        if (best < roots.size() && best_d <= 1e-6 * (std::abs(roots[i]) + 1.0)) {
            const Complex a = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = a;
            roots[best] = std::conj(a);
            done[i] = done[best] = true;
        } else {
            done[i] = true;  // leave as-is; residual check will catch a bad solve
        }
    }
}

}  // namespace

RootSet poly_roots(const Poly& p) {
    if (p.degree() < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");

    // Split off exact roots at the origin (low-order zero coefficients).
    double maxc = 0.0;
    for (double v : p.coeffs) maxc = std::max(maxc, std::abs(v));
    const double cut = 1e-12 * maxc;
    size_t origin = 0;
    while (origin + 1 < p.coeffs.size() && std::abs(p.coeffs[origin]) <= cut) ++origin;

    std::vector<double> c(p.coeffs.begin() + static_cast<long>(origin), p.coeffs.end());
    const double lead = c.back();
    for (double& v : c) v /= lead;

    RootSet out;
    out.roots.assign(origin, Complex(0.0, 0.0));

    const int n = static_cast<int>(c.size()) - 1;
    if (n >= 1) {
        std::vector<Complex> x(static_cast<size_t>(n));
        if (n == 1) {
            x[0] = Complex(-c[0], 0.0);
        } else {
            double radius = 0.0;
            for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[static_cast<size_t>(k)]));
            radius = 1.0 + radius;
            for (int k = 0; k < n; ++k) {
                const double ang = 2.0 * std::numbers::pi * k / n + 0.4;
                x[static_cast<size_t>(k)] = radius * Complex(std::cos(ang), std::sin(ang));
            }
            std::vector<double> dc(static_cast<size_t>(n));
            for (int k = 1; k <= n; ++k) dc[static_cast<size_t>(k - 1)] = c[static_cast<size_t>(k)] * k;

            const int max_iter = 60 + 20 * n;
            for (int it = 0; it < max_iter; ++it) {
                double worst = 0.0;
                for (int k = 0; k < n; ++k) {
                    const Complex xk = x[static_cast<size_t>(k)];
                    const Complex pv = eval_monic(c, xk);
                    Complex dv = eval_monic(dc, xk);
                    if (dv == Complex(0.0)) dv = Complex(1e-30, 0.0);
                    const Complex newton = pv / dv;
                    Complex rep = 0.0;
                    for (int j = 0; j < n; ++j) {
                        if (j == k) continue;
                        Complex diff = xk - x[static_cast<size_t>(j)];
                        if (diff == Complex(0.0)) diff = Complex(1e-30, 0.0);
                        rep += 1.0 / diff;
                    }
                    Complex denom = 1.0 - newton * rep;
                    if (denom == Complex(0.0)) denom = Complex(1e-30, 0.0);
                    const Complex delta = newton / denom;
                    x[static_cast<size_t>(k)] = xk - delta;
                    worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(xk)));
                }
                if (worst < 1e-14) break;
            }
            // Newton polish.
            for (int k = 0; k < n; ++k) {
                for (int step = 0; step < 2; ++step) {
                    const Complex xk = x[static_cast<size_t>(k)];
                    const Complex dv = eval_monic(dc, xk);
                    if (std::abs(dv) < 1e-30) break;
                    x[static_cast<size_t>(k)] = xk - eval_monic(c, xk) / dv;
                }
            }
        }

        enforce_conjugate_pairs(x);

        double worst_rel = 0.0;
        for (const Complex& r : x) {
            const double res = std::abs(eval_monic(c, r));
            out.residual_bound = std::max(out.residual_bound, res);
            worst_rel = std::max(worst_rel, res / residual_scale(c, r));
        }
        if (worst_rel > 1e-6)
            throw NonConvergence("root iteration did not converge to requested residual");

        out.roots.insert(out.roots.end(), x.begin(), x.end());
    }

    std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (size_t i = 0; i < out.roots.size(); ++i)
        for (size_t j = i + 1; j < out.roots.size(); ++j)
            if (std::abs(out.roots[i] - out.roots[j]) < 1e-7) out.close_roots = true;

    return out;
}

}  // namespace csbi
