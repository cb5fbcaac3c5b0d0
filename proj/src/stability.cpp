#include "csbi/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csbi {

StabilityVerdict verdict_for_roots(Domain domain, std::span<const Complex> poles, double tol) {
    StabilityVerdict v;
    v.margin = std::numeric_limits<double>::infinity();
    for (const Complex& r : poles) {
        const double m = domain == Domain::Continuous ? -r.real() : 1.0 - std::abs(r);
        v.margin = std::min(v.margin, m);
        if (m <= tol) {
            v.offenders.push_back(r);
            if (std::abs(m) <= tol) v.marginal = true;
        }
    }
    v.stable = v.offenders.empty();
    return v;
}

StabilityVerdict stability_by_roots(const ClosedLoop& T, double tol) {
    StabilityVerdict v = verdict_for_roots(T.domain, T.poles, tol);
    if (T.den_poly.degree() >= 1) {
        const bool table = T.domain == Domain::Continuous ? routh_hurwitz(T.den_poly)
                                                          : jury_test(T.den_poly);
        v.method_agreement = table == v.stable;
    }
    return v;
}

bool routh_hurwitz(const Poly& p) {
    const int n = p.degree();
    if (n < 1) throw std::invalid_argument("routh_hurwitz: degree must be >= 1");
    std::vector<double> c = p.coeffs;  // ascending
    if (c.back() < 0)
        for (double& v : c) v = -v;

    // A Hurwitz polynomial has all coefficients strictly positive.
    for (double v : c)
        if (v <= 0.0) return false;

    // Rows hold descending-power entries. Strict Hurwitz stability is
    // equivalent to every first-column entry being positive; a zero pivot or
    // a full zero row signals boundary or right-half-plane roots, which count
    // as unstable here.
    std::vector<double> prev, cur;
    for (int k = n; k >= 0; k -= 2) prev.push_back(c[static_cast<size_t>(k)]);
    for (int k = n - 1; k >= 0; k -= 2) cur.push_back(c[static_cast<size_t>(k)]);

    for (int row = 2; row <= n; ++row) {
        if (std::all_of(cur.begin(), cur.end(), [](double v) { return v == 0.0; }))
            return false;  // auxiliary-polynomial case: symmetric root set
        if (cur[0] <= 0.0) return false;
        double pivot = cur[0] != 0.0 ? cur[0] : 1e-12;
        std::vector<double> next(std::max<size_t>(prev.size(), 2) - 1, 0.0);
        for (size_t i = 0; i < next.size(); ++i) {
            const double a = i + 1 < prev.size() ? prev[i + 1] : 0.0;
            const double b = i + 1 < cur.size() ? cur[i + 1] : 0.0;
            next[i] = (pivot * a - prev[0] * b) / pivot;
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur.empty() || cur[0] > 0.0;
}

bool jury_test(const Poly& p) {
    const int n = p.degree();
    if (n < 1) throw std::invalid_argument("jury_test: degree must be >= 1");
    std::vector<double> a = p.coeffs;
    if (a.back() < 0)
        for (double& v : a) v = -v;

    // Schur-Cohn reduction: stable iff |a0| < an and the reduced polynomial
    // (an*p(z) - a0*p*(z))/z is stable. Each row is rescaled to stay in range.
    while (a.size() > 1) {
        const size_t m = a.size() - 1;
        const double a0 = a.front(), an = a.back();
        if (!(std::abs(a0) < an)) return false;  // includes singular |a0| == an
        std::vector<double> next(m);
        for (size_t k = 1; k <= m; ++k) next[k - 1] = an * a[k] - a0 * a[m - k];
        double maxv = 0.0;
        for (double v : next) maxv = std::max(maxv, std::abs(v));
        if (maxv == 0.0) return false;
        for (double& v : next) v /= maxv;
        a = std::move(next);
    }
    return true;
}

}  // namespace csbi
