#include "csbi/csbi_analytic.hpp"

#include <cmath>
#include <numbers>

namespace csbi {

namespace {

constexpr double kPi = std::numbers::pi;

// prod(-r_i); real for conjugate-closed root sets, empty product = 1.
double prod_neg(std::span<const Complex> roots) {
    Complex acc = 1.0;
    for (const Complex& r : roots) acc *= -r;
    return acc.real();
}

double sum_re_inv(std::span<const Complex> roots) {
    double acc = 0.0;
    for (const Complex& r : roots) acc += (1.0 / r).real();
    return acc;
}

double sum_log2_abs(std::span<const Complex> roots) {
    double acc = 0.0;
    for (const Complex& r : roots) acc += std::log2(std::abs(r));
    return acc;
}

const char* kSignConventionWarning =
    "DivergenceSignConvention: divergence sign taken from the sign of ln|T(0)| "
    "(the constant integrand after frequency inversion); statements reversing "
    "this inequality contradict the integrand's limit and are not followed";

}  // namespace

double lemma2_identity(Complex a, Complex b) {
    return 2.0 * kPi * (std::abs(a.real()) - std::abs(b.real()));
}

double lemma4_identity(Complex a) {
    const double m = std::abs(a);
    return m <= 1.0 ? 0.0 : 4.0 * kPi * std::log2(m);
}

CsbiResult csbi_continuous(const LoopTF& L, double boundary_tol) {
    if (L.domain != Domain::Continuous)
        throw std::invalid_argument("csbi_continuous: continuous-domain loop required");

    CsbiResult out;
    out.log_base = LogBase::Natural;

    const ZeroClassification zc = classify_zeros(L, boundary_tol);
    if (!zc.boundary.empty()) {
        out.status = CsbiStatus::Refused;
        out.refusal_reason = "BoundaryZero";
        return out;
    }

    const ClosedLoop T = close_loop(L);
    const StabilityVerdict sv = stability_by_roots(T);
    if (!sv.stable) {
        out.status = CsbiStatus::Refused;
        out.refusal_reason = "UnstableClosedLoop";
        return out;
    }
    if (!sv.method_agreement)
        out.warnings.push_back("StabilityMethodDisagreement: coefficient-table test "
                               "disagrees with root locations; root locations used");

    const int nu = relative_degree(L);
    const double K = L.gain;
    const double P = prod_neg(L.finite_poles);
    const double Z = prod_neg(L.zeros);
    out.nmp_zero_sum = sum_re_inv(zc.nmp);

    if (nu == 0 && std::abs(K + 1.0) <= 1e-12) {
        // Degenerate biproper loop: the closed-loop denominator loses degree.
        out.case_tag = CsbiCase::ContBiproperKNeg1;
        const Complex den0 = poly_eval(T.den_poly, 0.0);
        const Complex num0 = poly_eval(T.num_poly, 0.0);
        if (std::abs(den0) == 0.0) {
            out.status = CsbiStatus::PlusInfinity;
            return out;
        }
        const double t0 = std::abs(num0 / den0);
        if (std::abs(t0 - 1.0) <= 1e-9) {
            out.status = CsbiStatus::Undefined;
            out.warnings.push_back("DegenerateUnityGain: |T(0)| = 1 in the degenerate "
                                   "biproper case; no closed form applies");
            return out;
        }
        out.status = t0 > 1.0 ? CsbiStatus::PlusInfinity : CsbiStatus::MinusInfinity;
        out.warnings.push_back(kSignConventionWarning);
        return out;
    }

    if (L.integrator_count >= 2) {
        out.status = CsbiStatus::Finite;
        out.case_tag = CsbiCase::ContMultiIntegrator;
        out.correction = 0.0;
        out.value = out.nmp_zero_sum;
        return out;
    }

    if (L.integrator_count == 1) {
        out.status = CsbiStatus::Finite;
        out.case_tag = CsbiCase::ContSingleIntegrator;
        out.correction = -(1.0 / (2.0 * K)) * (P / Z);
        out.value = out.nmp_zero_sum + out.correction;
        return out;
    }

    // No pure integrator: bounded only in the rare constant-term coincidence
    // prod(-p) = -2K prod(-z), i.e. T(0) = -1.
    const double lhs = P + 2.0 * K * Z;
    const double scale = std::max({std::abs(P), std::abs(2.0 * K * Z), 1e-300});
    if (std::abs(lhs) / scale <= 1e-9) {
        out.status = CsbiStatus::Finite;
        out.case_tag = CsbiCase::ContNoIntegratorRare;
        out.value = sum_re_inv(L.finite_poles) - sum_re_inv(zc.mp);
        out.correction = out.value - out.nmp_zero_sum;
        return out;
    }
    if (std::abs(lhs) / scale <= 1e-4)
        out.warnings.push_back("NearRareCondition: |T(0)| is close to 1; the numeric "
                               "oracle will converge slowly");

    out.case_tag = CsbiCase::ContNoIntegratorUnbounded;
    const double ratio = std::abs(K * Z) / std::abs(P + K * Z);  // = |T(0)|
    out.status = ratio > 1.0 ? CsbiStatus::PlusInfinity : CsbiStatus::MinusInfinity;
    out.warnings.push_back(kSignConventionWarning);
    return out;
}

CsbiResult csbi_discrete(const LoopTF& L, double boundary_tol) {
    if (L.domain != Domain::Discrete)
        throw std::invalid_argument("csbi_discrete: discrete-domain loop required");

    CsbiResult out;
    out.log_base = LogBase::Base2;

    const ZeroClassification zc = classify_zeros(L, boundary_tol);
    if (!zc.boundary.empty()) {
        out.status = CsbiStatus::Refused;
        out.refusal_reason = "BoundaryZero";
        return out;
    }

    const double K = L.gain;
    if (K == 0.0) {
        out.status = CsbiStatus::Undefined;
        out.warnings.push_back("ZeroGain: L = 0 makes log|T| undefined everywhere");
        return out;
    }

    const int nu = relative_degree(L);
    if (nu == 0 && std::abs(K + 1.0) <= 1e-12) {
        out.status = CsbiStatus::Refused;
        out.refusal_reason = "NonCausal";
        return out;
    }

    const ClosedLoop T = close_loop(L);
    const StabilityVerdict sv = stability_by_roots(T);
    if (!sv.stable)
        out.warnings.push_back("UnstableHypothesisViolated: closed loop is not stable; "
                               "the formula is evaluated mechanically and the numeric "
                               "integral will differ");
    if (!sv.method_agreement)
        out.warnings.push_back("StabilityMethodDisagreement: coefficient-table test "
                               "disagrees with root locations; root locations used");

    out.status = CsbiStatus::Finite;
    out.nmp_zero_sum = sum_log2_abs(zc.nmp);
    if (nu >= 1) {
        out.case_tag = CsbiCase::DiscStrictlyProper;
        out.correction = std::log2(std::abs(K));
    } else {
        out.case_tag = CsbiCase::DiscBiproper;
        out.correction = std::log2(std::abs(K / (1.0 + K)));
    }
    out.value = out.nmp_zero_sum + out.correction;
    return out;
}

double middleton_crosscheck(const ClosedLoop& T) {
    if (T.domain != Domain::Continuous)
        throw std::invalid_argument("middleton_crosscheck: continuous closed loop required");
    const Complex num0 = poly_eval(T.num_poly, 0.0);
    const Complex den0 = poly_eval(T.den_poly, 0.0);
    if (std::abs(num0) == 0.0) throw ZeroAtOrigin("T(0) = 0");
    const Complex t0 = num0 / den0;
    const Complex dnum0 = poly_eval(poly_derivative(T.num_poly), 0.0);
    const Complex dden0 = poly_eval(poly_derivative(T.den_poly), 0.0);
    const Complex dt0 = (dnum0 * den0 - num0 * dden0) / (den0 * den0);

    Complex zu_sum = 0.0;
    for (const Complex& z : T.zeros)
        if (z.real() > 1e-9) zu_sum += 1.0 / z;

    const Complex rhs = zu_sum + dt0 / (2.0 * t0);
    return rhs.real();
}

double sung_crosscheck(const LoopTF& L) {
    if (L.domain != Domain::Discrete)
        throw std::invalid_argument("sung_crosscheck: discrete-domain loop required");
    if (relative_degree(L) == 0)
        throw RelativeDegreeZero("sung_crosscheck requires relative degree >= 1");
    const ZeroClassification zc = classify_zeros(L);
    double acc = std::log2(std::abs(L.gain));
    for (const Complex& z : zc.nmp) acc += std::log2(std::abs(z));
    return acc;
}

}  // namespace csbi
