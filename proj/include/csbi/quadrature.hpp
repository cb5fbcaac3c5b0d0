#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csbi/transfer_function.hpp"

namespace csbi {

enum class QuadStatus { Converged, DivergenceSuspected };
enum class DivergenceSign { Plus, Minus };

struct QuadOptions {
    double abs_tol = 1e-6;
    long max_evaluations = 2'000'000;
    /// Boundary between direct integration and the inverted-variable tail.
    double split_frequency = 1.0;
};

struct QuadratureReport {
    QuadStatus status = QuadStatus::Converged;
    double value = 0.0;  // meaningful iff status == Converged
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    std::optional<DivergenceSign> divergence_sign;
    std::vector<std::string> notes;
};

/// Direct evaluation of (1/2pi) int_{-inf}^{inf} ln|T(jw)|/w^2 dw from |T|
/// samples. The tail beyond split_frequency is integrated in the inverted
/// variable; a probe of |T(0)| diagnoses the divergent no-integrator case.
QuadratureReport csbi_continuous_numeric(const ClosedLoop& T, const QuadOptions& opts = {});

/// Direct evaluation of (1/2pi) int_{-pi}^{pi} log2|T(e^{jw})| dw.
QuadratureReport csbi_discrete_numeric(const ClosedLoop& T, const QuadOptions& opts = {});

/// Numerical value of int_{-inf}^{inf} ln|(jw-a)/(jw-b)|^2 dw.
QuadratureReport lemma2_numeric(Complex a, Complex b, const QuadOptions& opts = {});

/// Numerical value of int_{-pi}^{pi} log2|e^{jw}-a|^2 dw.
QuadratureReport lemma4_numeric(Complex a, const QuadOptions& opts = {});

}  // namespace csbi
