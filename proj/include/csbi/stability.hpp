#pragma once

#include <vector>

#include "csbi/transfer_function.hpp"

namespace csbi {

struct StabilityVerdict {
    bool stable = false;
    /// Continuous: min over poles of -Re r; Discrete: min over poles of 1 - |r|.
    double margin = 0.0;
    /// Root-location verdict agrees with the coefficient-table test.
    bool method_agreement = true;
    /// Poles violating the stability region (including boundary cases).
    std::vector<Complex> offenders;
    /// Some offender sits inside the boundary tolerance band.
    bool marginal = false;
};

StabilityVerdict stability_by_roots(const ClosedLoop& T, double tol = 1e-9);

/// Root-location verdict for an arbitrary pole set; used by the table tests'
/// cross-validation as well.
StabilityVerdict verdict_for_roots(Domain domain, std::span<const Complex> poles, double tol = 1e-9);

/// True iff every root of p has a strictly negative real part.
bool routh_hurwitz(const Poly& p);

/// True iff every root of p lies strictly inside the unit circle.
bool jury_test(const Poly& p);

}  // namespace csbi
