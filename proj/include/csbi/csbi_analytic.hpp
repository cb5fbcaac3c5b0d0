#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csbi/stability.hpp"
#include "csbi/transfer_function.hpp"

namespace csbi {

enum class CsbiStatus { Finite, PlusInfinity, MinusInfinity, Undefined, Refused };

enum class CsbiCase {
    ContMultiIntegrator,
    ContSingleIntegrator,
    ContNoIntegratorRare,
    ContNoIntegratorUnbounded,
    ContBiproperKNeg1,
    DiscStrictlyProper,
    DiscBiproper,
};

enum class LogBase { Natural, Base2 };

struct CsbiResult {
    CsbiStatus status = CsbiStatus::Undefined;
    double value = 0.0;  // meaningful iff status == Finite
    std::optional<CsbiCase> case_tag;
    double nmp_zero_sum = 0.0;
    double correction = 0.0;
    std::vector<std::string> warnings;
    LogBase log_base = LogBase::Natural;
    std::string refusal_reason;  // set iff status == Refused

    bool finite() const { return status == CsbiStatus::Finite; }
};

struct ZeroAtOrigin : std::runtime_error { using std::runtime_error::runtime_error; };
struct RelativeDegreeZero : std::runtime_error { using std::runtime_error::runtime_error; };

/// Value of the full-line integral of ln|(jw-a)/(jw-b)|^2 dw.
double lemma2_identity(Complex a, Complex b);

/// Value of the integral over [-pi, pi] of log2|e^{jw}-a|^2 dw.
double lemma4_identity(Complex a);

/// Weighted continuous-time Bode integral of ln|T|, (1/2pi) int ln|T(jw)|/w^2 dw,
/// from the structure of L. Natural-log convention.
CsbiResult csbi_continuous(const LoopTF& L, double boundary_tol = 1e-9);

/// Unweighted discrete-time Bode integral of log2|T| over [-pi, pi], scaled
/// by 1/2pi. Base-2 convention. An unstable closed loop yields a warning,
/// not a refusal; the formula is still evaluated mechanically.
CsbiResult csbi_discrete(const LoopTF& L, double boundary_tol = 1e-9);

/// Independent route for the continuous integral when T(0) = 1:
/// sum of inverse non-minimum phase zeros plus T'(0)/(2 T(0)), evaluated
/// exactly from the closed-loop polynomials.
double middleton_crosscheck(const ClosedLoop& T);

/// Independent route for the strictly proper discrete integral:
/// sum of log2|z_u| plus log2|K|.
double sung_crosscheck(const LoopTF& L);

}  // namespace csbi
