#include <complex>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csbi/csbi_analytic.hpp"
#include "csbi/quadrature.hpp"
#include "csbi/report.hpp"
#include "csbi/stability.hpp"
#include "csbi/transfer_function.hpp"

namespace py = pybind11;
using namespace csbi;

namespace {

const char* status_text(CsbiStatus s) {
    switch (s) {
        case CsbiStatus::Finite: return "finite";
        case CsbiStatus::PlusInfinity: return "plus_infinity";
        case CsbiStatus::MinusInfinity: return "minus_infinity";
        case CsbiStatus::Undefined: return "undefined";
        case CsbiStatus::Refused: return "refused";
    }
    return "?";
}

py::dict csbi_dict(const CsbiResult& r) {
    py::dict d;
    d["status"] = status_text(r.status);
    if (r.finite()) {
        d["value"] = r.value;
        d["nmp_zero_sum"] = r.nmp_zero_sum;
        d["correction"] = r.correction;
    }
    d["log_base"] = r.log_base == LogBase::Natural ? "natural" : "2";
    d["warnings"] = r.warnings;
    if (!r.refusal_reason.empty()) d["refusal_reason"] = r.refusal_reason;
    return d;
}

py::dict quad_dict(const QuadratureReport& r) {
    py::dict d;
    d["status"] = r.status == QuadStatus::Converged ? "converged" : "divergence_suspected";
    if (r.status == QuadStatus::Converged) {
        d["value"] = r.value;
        d["abs_error_estimate"] = r.abs_error_estimate;
    }
    if (r.divergence_sign)
        d["divergence_sign"] = *r.divergence_sign == DivergenceSign::Plus ? "plus" : "minus";
    d["evaluations"] = r.evaluations;
    d["notes"] = r.notes;
    return d;
}

QuadOptions quad_opts(double abs_tol) {
    QuadOptions o;
    o.abs_tol = abs_tol;
    return o;
}

}  // namespace

PYBIND11_MODULE(_csbi, m) {
    m.doc() = "Complementary sensitivity Bode integrals: analytic values with a "
              "quadrature oracle";

    py::class_<LoopTF>(m, "LoopTF")
        .def_readonly("gain", &LoopTF::gain)
        .def_readonly("zeros", &LoopTF::zeros)
        .def_readonly("poles", &LoopTF::finite_poles)
        .def_readonly("integrator_count", &LoopTF::integrator_count)
        .def_property_readonly("domain", [](const LoopTF& L) {
            return L.domain == Domain::Continuous ? "continuous" : "discrete";
        })
        .def("__repr__", [](const LoopTF& L) { return "LoopTF(" + format_tf(L) + ")"; });

    m.def("parse_tf", &parse_tf, py::arg("text"), "Parse a transfer-function string.");
    m.def("format_tf", &format_tf, py::arg("loop"), "Canonical text form of a loop.");
    m.def("relative_degree", &relative_degree, py::arg("loop"));

    m.def("closed_loop_poles", [](const LoopTF& L) { return close_loop(L).poles; },
          py::arg("loop"), "Poles of L/(1+L).");
    m.def("is_stable", [](const LoopTF& L) { return stability_by_roots(close_loop(L)).stable; },
          py::arg("loop"), "Closed-loop stability by root locations.");

    m.def("csbi", [](const LoopTF& L) {
              return csbi_dict(L.domain == Domain::Continuous ? csbi_continuous(L)
                                                              : csbi_discrete(L));
          },
          py::arg("loop"), "Analytic Bode-integral value of the complementary sensitivity.");
    m.def("csbi_numeric", [](const LoopTF& L, double abs_tol) {
              const ClosedLoop T = close_loop(L);
              return quad_dict(L.domain == Domain::Continuous
                                   ? csbi_continuous_numeric(T, quad_opts(abs_tol))
                                   : csbi_discrete_numeric(T, quad_opts(abs_tol)));
          },
          py::arg("loop"), py::arg("abs_tol") = 1e-6,
          "Adaptive-quadrature value of the same integral.");

    m.def("lemma2_identity", &lemma2_identity, py::arg("a"), py::arg("b"));
    m.def("lemma4_identity", &lemma4_identity, py::arg("a"));
    m.def("lemma2_numeric",
          [](Complex a, Complex b, double abs_tol) {
              return quad_dict(lemma2_numeric(a, b, quad_opts(abs_tol)));
          },
          py::arg("a"), py::arg("b"), py::arg("abs_tol") = 1e-6);
    m.def("lemma4_numeric",
          [](Complex a, double abs_tol) { return quad_dict(lemma4_numeric(a, quad_opts(abs_tol))); },
          py::arg("a"), py::arg("abs_tol") = 1e-6);

    m.def("analyze_json", [](const std::string& tf) {
              const Outcome o = run_analyze(tf, {});
              return py::make_tuple(o.report.dump(), o.exit_code);
          },
          py::arg("tf"), "Full analytic report as (json_text, exit_code).");
    m.def("verify_json", [](const std::string& tf) {
              const Outcome o = run_verify(tf, {});
              return py::make_tuple(o.report.dump(), o.exit_code);
          },
          py::arg("tf"), "Analytic + numeric report as (json_text, exit_code).");

    py::register_exception<SyntaxError>(m, "TFSyntaxError");
    py::register_exception<MixedVariables>(m, "MixedVariables");
    py::register_exception<OriginZero>(m, "OriginZero");
    py::register_exception<ImproperTF>(m, "ImproperTF");
    py::register_exception<NonCausalClosedLoop>(m, "NonCausalClosedLoop");
}
