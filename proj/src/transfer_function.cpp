#include "csbi/transfer_function.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "csbi/numfmt.hpp"

namespace csbi {

namespace {

constexpr double kOriginTol = 1e-9;

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    // Returns numerator and denominator polynomials; sets var ('s'/'z' or 0).
    std::pair<Poly, Poly> run() {
        skip_ws();
        bool negate = consume('-');
        Poly num = parse_prod();
        if (negate) num = poly_mul(num, Poly({-1.0}));
        Poly den({1.0});
        skip_ws();
        if (consume('/')) den = parse_prod();
        skip_ws();
        if (pos_ < text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return {std::move(num), std::move(den)};
    }

    char var() const { return var_; }

  private:
    const std::string& text_;
    size_t pos_ = 0;
    char var_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }

    bool at_number() {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    bool at_var() {
        const char c = peek();
        return c == 's' || c == 'z';
    }

    double parse_number() {
        skip_ws();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) throw SyntaxError("expected a number", pos_);
        pos_ += static_cast<size_t>(ptr - begin);
        return value;
    }

    char parse_var() {
        skip_ws();
        const char c = text_[pos_];
        if (var_ != 0 && var_ != c) throw MixedVariables("both 's' and 'z' appear in the expression");
        var_ = c;
        ++pos_;
        return c;
    }

    unsigned parse_uint() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw SyntaxError("expected an integer exponent", pos_);
        unsigned v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            v = v * 10 + static_cast<unsigned>(text_[pos_++] - '0');
        return v;
    }

    static Poly poly_pow(const Poly& p, unsigned k) {
        Poly out({1.0});
        for (unsigned i = 0; i < k; ++i) out = poly_mul(out, p);
        return out;
    }

    Poly parse_prod() {
        Poly acc = parse_factor();
        while (true) {
            skip_ws();
            if (!consume('*')) break;
            acc = poly_mul(acc, parse_factor());
        }
        return acc;
    }

    Poly parse_factor() {
        if (at_number()) return Poly({parse_number()});
        if (at_var()) {
            parse_var();
            unsigned k = consume('^') ? parse_uint() : 1;
            std::vector<double> c(k + 1, 0.0);
            c[k] = 1.0;
            return Poly(std::move(c));
        }
        if (consume('(')) {
            Poly inner = parse_polyexpr();
            expect(')');
            if (consume('^')) inner = poly_pow(inner, parse_uint());
            return inner;
        }
        throw SyntaxError("expected a number, variable, or '('", pos_);
    }

    // Sum of products, with an optional leading sign: the contents of "(...)".
    Poly parse_polyexpr() {
        double sign = consume('-') ? -1.0 : 1.0;
        Poly acc = poly_mul(Poly({sign}), parse_prod());
        while (true) {
            skip_ws();
            if (consume('+')) sign = 1.0;
            else if (consume('-')) sign = -1.0;
            else break;
            acc = poly_add(acc, poly_mul(Poly({sign}), parse_prod()));
        }
        return acc;
    }
};

std::string fmt(double v) { return fmt_double(v); }

// Emit the monic factor text for a set of roots (conjugate-closed).
std::string factor_text(char var, std::span<const Complex> roots) {
    std::vector<Complex> sorted(roots.begin(), roots.end());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return std::abs(a.imag()) < std::abs(b.imag());
    });
    std::string out;
    std::vector<bool> used(sorted.size(), false);
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const Complex r = sorted[i];
        if (!out.empty()) out += "*";
        if (r.imag() == 0.0) {
            if (r.real() == 0.0) { out += var; continue; }
            out += "(";
            out += var;
            out += r.real() > 0 ? "-" + fmt(r.real()) : "+" + fmt(-r.real());
            out += ")";
            continue;
        }
        // conjugate pair -> quadratic var^2 + b*var + c
        for (size_t j = i + 1; j < sorted.size(); ++j) {
            if (!used[j] && std::abs(sorted[j] - std::conj(r)) <= 1e-12 * (std::abs(r) + 1.0)) {
                used[j] = true;
                break;
            }
        }
        const double b = -2.0 * r.real();
        const double c = std::norm(r);
        out += "(";
        out += var;
        out += "^2";
        if (b != 0.0) out += (b > 0 ? "+" + fmt(b) : "-" + fmt(-b)) + "*" + var;
        out += (c > 0 ? "+" + fmt(c) : "-" + fmt(-c));
        out += ")";
    }
    return out;
}

}  // namespace

LoopTF parse_tf(const std::string& text) {
    Parser parser(text);
    auto [num, den] = parser.run();
    if (parser.var() == 0) throw SyntaxError("no variable ('s' or 'z') in expression", 0);
    if (den.is_zero()) throw SyntaxError("denominator is identically zero", 0);
    if (num.degree() > den.degree() && !num.is_zero())
        throw ImproperTF("numerator degree exceeds denominator degree");

    LoopTF L;
    L.domain = parser.var() == 's' ? Domain::Continuous : Domain::Discrete;
    L.gain = num.is_zero() ? 0.0 : num.leading() / den.leading();

    if (!num.is_zero() && num.degree() >= 1) {
        L.zeros = poly_roots(num).roots;
        for (const Complex& z : L.zeros)
            if (std::abs(z) < kOriginTol) throw OriginZero("open-loop zero at the origin");
    }
    if (den.degree() >= 1) {
        auto proots = poly_roots(den).roots;
        if (L.domain == Domain::Continuous) {
            for (const Complex& p : proots) {
                if (std::abs(p) < kOriginTol) ++L.integrator_count;
                else L.finite_poles.push_back(p);
            }
        } else {
            L.finite_poles = std::move(proots);
        }
    }
    return L;
}

std::string format_tf(const LoopTF& L) {
    const char var = L.domain == Domain::Continuous ? 's' : 'z';
    std::string num;
    const std::string zeros_text = factor_text(var, L.zeros);
    if (L.gain == 1.0 && !zeros_text.empty()) {
        num = zeros_text;
    } else {
        num = fmt(L.gain);
        if (!zeros_text.empty()) num += "*" + zeros_text;
    }
    std::string den;
    if (L.integrator_count == 1) den = std::string(1, var);
    else if (L.integrator_count > 1) den = std::string(1, var) + "^" + std::to_string(L.integrator_count);
    const std::string poles_text = factor_text(var, L.finite_poles);
    if (!poles_text.empty()) den += (den.empty() ? "" : "*") + poles_text;
    return den.empty() ? num : num + "/" + den;
}

int relative_degree(const LoopTF& L) {
    return L.integrator_count + static_cast<int>(L.finite_poles.size()) -
           static_cast<int>(L.zeros.size());
}

ClosedLoop close_loop(const LoopTF& L) {
    const int nu = relative_degree(L);
    if (L.domain == Domain::Discrete && nu == 0 && std::abs(L.gain + 1.0) <= 1e-12)
        throw NonCausalClosedLoop("biproper discrete loop with gain -1 has a pole at infinity");

    const int n = L.integrator_count + static_cast<int>(L.finite_poles.size());

    Poly num;
    if (L.gain != 0.0) num = poly_from_roots(L.zeros, L.gain);

    Poly open_den = poly_from_roots(L.finite_poles, 1.0);
    if (L.integrator_count > 0) {
        std::vector<double> shifted(open_den.coeffs.size() + static_cast<size_t>(L.integrator_count), 0.0);
        std::copy(open_den.coeffs.begin(), open_den.coeffs.end(),
                  shifted.begin() + L.integrator_count);
        open_den = Poly(std::move(shifted));
    }

    ClosedLoop T;
    T.domain = L.domain;
    T.zeros = L.zeros;
    T.num_poly = num;
    T.den_poly = poly_add(open_den, num);
    if (T.den_poly.is_zero()) throw NonCausalClosedLoop("closed-loop denominator is identically zero");
    T.degenerate_leading = T.den_poly.degree() < n;
    T.gain = num.is_zero() ? 0.0 : num.leading() / T.den_poly.leading();
    if (T.den_poly.degree() >= 1) T.poles = poly_roots(T.den_poly).roots;
    return T;
}

ZeroClassification classify_zeros(const LoopTF& L, double tol) {
    ZeroClassification out;
    for (const Complex& z : L.zeros) {
        if (L.domain == Domain::Continuous) {
            if (z.real() > tol) out.nmp.push_back(z);
            else if (z.real() < -tol) out.mp.push_back(z);
            else out.boundary.push_back(z);
        } else {
            const double m = std::abs(z);
            if (m > 1.0 + tol) out.nmp.push_back(z);
            else if (m < 1.0 - tol) out.mp.push_back(z);
            else out.boundary.push_back(z);
        }
    }
    return out;
}

std::vector<std::pair<Complex, Complex>> detect_cancellations(const LoopTF& L, double tol) {
    std::vector<std::pair<Complex, Complex>> pairs;
    std::vector<bool> used(L.finite_poles.size(), false);
    for (const Complex& z : L.zeros) {
        size_t best = L.finite_poles.size();
        double best_d = tol;
        for (size_t j = 0; j < L.finite_poles.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - L.finite_poles[j]);
            if (d <= best_d) { best_d = d; best = j; }
        }
        if (best < L.finite_poles.size()) {
            used[best] = true;
            pairs.emplace_back(z, L.finite_poles[best]);
        }
    }
    return pairs;
}

LoopTF cancel_pairs(const LoopTF& L, double tol) {
    const auto pairs = detect_cancellations(L, tol);
    LoopTF out = L;
    for (const auto& [z, p] : pairs) {
        auto zi = std::find_if(out.zeros.begin(), out.zeros.end(),
                               [&](Complex v) { return v == z; });
        if (zi != out.zeros.end()) out.zeros.erase(zi);
        auto pi = std::find_if(out.finite_poles.begin(), out.finite_poles.end(),
                               [&](Complex v) { return v == p; });
        if (pi != out.finite_poles.end()) out.finite_poles.erase(pi);
    }
    return out;
}

}  // namespace csbi
