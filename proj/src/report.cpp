#include "csbi/report.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "csbi/csbi_analytic.hpp"
#include "csbi/numfmt.hpp"
#include "csbi/quadrature.hpp"
#include "csbi/stability.hpp"
#include "csbi/transfer_function.hpp"

namespace csbi {

namespace {

using json = nlohmann::ordered_json;

json complex_list(std::span<const Complex> values) {
    json out = json::array();
    for (const Complex& v : values) out.push_back({v.real(), v.imag()});
    return out;
}

std::string complex_text(Complex v) {
    if (v.imag() == 0.0) return fmt_double(v.real());
    return fmt_double(v.real()) + (v.imag() < 0 ? "-" : "+") + fmt_double(std::abs(v.imag())) + "i";
}

const char* status_name(CsbiStatus s) {
    switch (s) {
        case CsbiStatus::Finite: return "finite";
        case CsbiStatus::PlusInfinity: return "plus_infinity";
        case CsbiStatus::MinusInfinity: return "minus_infinity";
        case CsbiStatus::Undefined: return "undefined";
        case CsbiStatus::Refused: return "refused";
    }
    return "?";
}

const char* case_name(CsbiCase c) {
    switch (c) {
        case CsbiCase::ContMultiIntegrator: return "ContMultiIntegrator";
        case CsbiCase::ContSingleIntegrator: return "ContSingleIntegrator";
        case CsbiCase::ContNoIntegratorRare: return "ContNoIntegratorRare";
        case CsbiCase::ContNoIntegratorUnbounded: return "ContNoIntegratorUnbounded";
        case CsbiCase::ContBiproperKNeg1: return "ContBiproperKNeg1";
        case CsbiCase::DiscStrictlyProper: return "DiscStrictlyProper";
        case CsbiCase::DiscBiproper: return "DiscBiproper";
    }
    return "?";
}

// Presentation conversion between natural log and base-2 values.
double present(double value, LogBase internal, const std::string& requested) {
    if (requested == "internal") return value;
    const bool want_natural = requested == "natural";
    if (internal == LogBase::Natural && !want_natural) return value / std::numbers::ln2;
    if (internal == LogBase::Base2 && want_natural) return value * std::numbers::ln2;
    return value;
}

json error_json(const std::string& type, const std::string& message, long position = -1) {
    json e = {{"error", {{"type", type}, {"message", message}}}};
    if (position >= 0) e["error"]["position"] = position;
    return e;
}

struct Pipeline {
    LoopTF loop;
    std::vector<std::pair<Complex, Complex>> cancellations;
    std::optional<ClosedLoop> closed;
    std::optional<StabilityVerdict> verdict;
    CsbiResult analytic;
    std::vector<std::string> warnings;
};

Pipeline run_pipeline(const std::string& tf_text, const CliOptions& opts) {
    Pipeline p;
    p.loop = parse_tf(tf_text);
    p.cancellations = detect_cancellations(p.loop);
    if (opts.cancel && !p.cancellations.empty()) p.loop = cancel_pairs(p.loop);
    for (const auto& [z, pl] : p.cancellations)
        p.warnings.push_back("CancellationDetected: zero " + complex_text(z) + " cancels pole " +
                             complex_text(pl) + (opts.cancel ? " (removed)" : " (kept)"));
    try {
        p.closed = close_loop(p.loop);
        p.verdict = stability_by_roots(*p.closed);
    } catch (const NonCausalClosedLoop&) {
        // csbi_discrete reports this structurally as Refused(NonCausal).
    }
    p.analytic = p.loop.domain == Domain::Continuous
                     ? csbi_continuous(p.loop, opts.boundary_tol)
                     : csbi_discrete(p.loop, opts.boundary_tol);
    for (const std::string& w : p.analytic.warnings) p.warnings.push_back(w);
    if (p.verdict && p.verdict->marginal)
        p.warnings.push_back("MarginalPoles: closed-loop poles within the boundary tolerance band");
    return p;
}

json base_report(const Pipeline& p, const CliOptions& opts) {
    json rep;
    rep["input_echo"] = format_tf(p.loop);
    rep["domain"] = p.loop.domain == Domain::Continuous ? "continuous" : "discrete";

    json st;
    st["relative_degree"] = relative_degree(p.loop);
    st["integrator_count"] = p.loop.integrator_count;
    st["zeros"] = complex_list(p.loop.zeros);
    st["poles"] = complex_list(p.loop.finite_poles);
    st["gain"] = p.loop.gain;
    json cc = json::array();
    for (const auto& [z, pl] : p.cancellations)
        cc.push_back({{"zero", {z.real(), z.imag()}}, {"pole", {pl.real(), pl.imag()}}});
    st["cancellations"] = cc;
    if (p.closed) st["closed_loop_poles"] = complex_list(p.closed->poles);
    rep["structure"] = st;

    json sv;
    if (p.verdict) {
        sv["stable"] = p.verdict->stable;
        sv["margin"] = p.verdict->margin;
        sv["method_agreement"] = p.verdict->method_agreement;
        sv["offenders"] = complex_list(p.verdict->offenders);
    } else {
        sv["stable"] = false;
        sv["margin"] = nullptr;
        sv["method_agreement"] = true;
        sv["offenders"] = json::array();
        sv["note"] = "closed loop is not causal";
    }
    rep["stability"] = sv;

    json an;
    an["status"] = status_name(p.analytic.status);
    if (p.analytic.finite()) {
        an["value"] = present(p.analytic.value, p.analytic.log_base, opts.log_base);
        an["terms"] = {
            {"nmp_zero_sum", present(p.analytic.nmp_zero_sum, p.analytic.log_base, opts.log_base)},
            {"correction", present(p.analytic.correction, p.analytic.log_base, opts.log_base)}};
    }
    if (p.analytic.case_tag) an["case"] = case_name(*p.analytic.case_tag);
    if (!p.analytic.refusal_reason.empty()) an["refusal_reason"] = p.analytic.refusal_reason;
    an["log_base"] = p.analytic.log_base == LogBase::Natural ? "natural" : "2";
    if (opts.log_base != "internal") an["presented_log_base"] = opts.log_base;
    rep["analytic"] = an;
    return rep;
}

int analytic_exit_code(const CsbiResult& r) {
    switch (r.status) {
        case CsbiStatus::Finite: return 0;
        case CsbiStatus::Refused: return 3;
        default: return 2;
    }
}

void add_crosschecks(json& rep, const Pipeline& p) {
    json cx;
    bool any = false;
    if (p.loop.domain == Domain::Continuous && p.closed && p.verdict && p.verdict->stable) {
        try {
            const double m = middleton_crosscheck(*p.closed);
            cx["middleton"] = m;
            any = true;
            if (p.analytic.finite() && p.loop.integrator_count >= 1)
                cx["agreement_flags"]["middleton_matches"] =
                    std::abs(m - p.analytic.value) <= 1e-9;
        } catch (const ZeroAtOrigin&) {
        }
    }
    if (p.loop.domain == Domain::Discrete && relative_degree(p.loop) >= 1 && p.analytic.finite()) {
        const double s = sung_crosscheck(p.loop);
        cx["sung"] = s;
        any = true;
        cx["agreement_flags"]["sung_matches"] = std::abs(s - p.analytic.value) <= 1e-12;
    }
    if (any) rep["crosschecks"] = cx;
}

void add_elapsed(json& rep, std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    rep["elapsed_ms"] = std::chrono::duration<double, std::milli>(dt).count();
}

Outcome run_report(const std::string& tf_text, const CliOptions& opts, bool with_numeric) {
    const auto t0 = std::chrono::steady_clock::now();
    Pipeline p;
    try {
        p = run_pipeline(tf_text, opts);
    } catch (const SyntaxError& e) {
        return {error_json("SyntaxError", e.what(), static_cast<long>(e.position)), 1};
    } catch (const MixedVariables& e) {
        return {error_json("MixedVariables", e.what()), 1};
    } catch (const OriginZero& e) {
        return {error_json("OriginZero", e.what()), 1};
    } catch (const ImproperTF& e) {
        return {error_json("ImproperTF", e.what()), 1};
    } catch (const std::exception& e) {
        return {error_json("InternalError", e.what()), 1};
    }

    json rep = base_report(p, opts);
    int code = analytic_exit_code(p.analytic);

    if (with_numeric && p.analytic.status != CsbiStatus::Refused && p.closed) {
        QuadOptions qopts;
        qopts.abs_tol = opts.quad_tol;
        const QuadratureReport num = p.loop.domain == Domain::Continuous
                                         ? csbi_continuous_numeric(*p.closed, qopts)
                                         : csbi_discrete_numeric(*p.closed, qopts);
        json nj;
        nj["status"] = num.status == QuadStatus::Converged ? "converged" : "divergence_suspected";
        if (num.status == QuadStatus::Converged) {
            nj["value"] = present(num.value, p.analytic.log_base, opts.log_base);
            nj["abs_error_estimate"] = num.abs_error_estimate;
        }
        nj["evaluations"] = num.evaluations;
        if (num.divergence_sign)
            nj["divergence_sign"] = *num.divergence_sign == DivergenceSign::Plus ? "plus" : "minus";
        nj["notes"] = num.notes;
        rep["numeric"] = nj;

        bool agree = false;
        if (p.analytic.finite() && num.status == QuadStatus::Converged) {
            agree = std::abs(p.analytic.value - num.value) <=
                    std::max(opts.agree_tol, 3.0 * num.abs_error_estimate);
        } else if (num.status == QuadStatus::DivergenceSuspected && num.divergence_sign) {
            agree = (p.analytic.status == CsbiStatus::PlusInfinity &&
                     *num.divergence_sign == DivergenceSign::Plus) ||
                    (p.analytic.status == CsbiStatus::MinusInfinity &&
                     *num.divergence_sign == DivergenceSign::Minus);
        }
        rep["numeric"]["agreement"] = agree;
        if (!agree && p.analytic.status != CsbiStatus::Undefined) code = 4;
    }

    add_crosschecks(rep, p);
    rep["warnings"] = p.warnings;
    add_elapsed(rep, t0);
    return {rep, code};
}

}  // namespace

Outcome run_analyze(const std::string& tf_text, const CliOptions& opts) {
    return run_report(tf_text, opts, false);
}

Outcome run_verify(const std::string& tf_text, const CliOptions& opts) {
    return run_report(tf_text, opts, true);
}

Outcome run_parse(const std::string& tf_text, const CliOptions&) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Pipeline p;
        p.loop = parse_tf(tf_text);
        p.cancellations = detect_cancellations(p.loop);
        json rep = json::object();
        rep["input_echo"] = format_tf(p.loop);
        rep["domain"] = p.loop.domain == Domain::Continuous ? "continuous" : "discrete";
        json st;
        st["relative_degree"] = relative_degree(p.loop);
        st["integrator_count"] = p.loop.integrator_count;
        st["zeros"] = complex_list(p.loop.zeros);
        st["poles"] = complex_list(p.loop.finite_poles);
        st["gain"] = p.loop.gain;
        json cc = json::array();
        for (const auto& [z, pl] : p.cancellations)
            cc.push_back({{"zero", {z.real(), z.imag()}}, {"pole", {pl.real(), pl.imag()}}});
        st["cancellations"] = cc;
        rep["structure"] = st;
        add_elapsed(rep, t0);
        return {rep, 0};
    } catch (const SyntaxError& e) {
        return {error_json("SyntaxError", e.what(), static_cast<long>(e.position)), 1};
    } catch (const MixedVariables& e) {
        return {error_json("MixedVariables", e.what()), 1};
    } catch (const OriginZero& e) {
        return {error_json("OriginZero", e.what()), 1};
    } catch (const ImproperTF& e) {
        return {error_json("ImproperTF", e.what()), 1};
    } catch (const std::exception& e) {
        return {error_json("InternalError", e.what()), 1};
    }
}

Outcome run_identities(long count, unsigned long long seed, const CliOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    if (count < 1) return {error_json("InvalidCount", "count must be >= 1"), 1};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-5.0, 5.0);
    QuadOptions qopts;
    qopts.abs_tol = opts.quad_tol;

    double max_dev = 0.0;
    json failures = json::array();
    long passes = 0;

    for (long i = 0; i < count; ++i) {
        const Complex a(box(rng), box(rng));
        const Complex b(box(rng), box(rng));
        const double ref = lemma2_identity(a, b);
        const QuadratureReport num = lemma2_numeric(a, b, qopts);
        const double dev = std::abs(ref - num.value);
        max_dev = std::max(max_dev, dev);
        const double tol = std::max(1e-4, 1e-3 * std::abs(ref));
        if (num.status != QuadStatus::Converged || dev > tol)
            failures.push_back({{"lemma", 2},
                                {"a", {a.real(), a.imag()}},
                                {"b", {b.real(), b.imag()}},
                                {"analytic", ref},
                                {"numeric", num.value},
                                {"deviation", dev}});
        else
            ++passes;
    }
    for (long i = 0; i < count; ++i) {
        Complex a;
        do {
            a = Complex(0.8 * box(rng), 0.8 * box(rng));
        } while (std::abs(a) > 4.0);
        const double ref = lemma4_identity(a);
        const QuadratureReport num = lemma4_numeric(a, qopts);
        const double dev = std::abs(ref - num.value);
        max_dev = std::max(max_dev, dev);
        const double tol = std::max(1e-4, 1e-3 * std::abs(ref));
        if (num.status != QuadStatus::Converged || dev > tol)
            failures.push_back({{"lemma", 4},
                                {"a", {a.real(), a.imag()}},
                                {"analytic", ref},
                                {"numeric", num.value},
                                {"deviation", dev}});
        else
            ++passes;
    }

    json rep;
    rep["count"] = count;
    rep["seed"] = seed;
    rep["passes"] = passes;
    rep["max_deviation"] = max_dev;
    rep["failures"] = failures;
    add_elapsed(rep, t0);
    return {rep, failures.empty() ? 0 : 4};
}

std::string render(const nlohmann::ordered_json& report, const std::string& format) {
    if (format == "json") return report.dump(2);

    if (format == "csv") {
        auto get = [&report](const char* outer, const char* inner) -> std::string {
            if (!report.contains(outer)) return "";
            const auto& o = report[outer];
            if (!o.contains(inner)) return "";
            return o[inner].dump();
        };
        std::ostringstream out;
        out << "input_echo,domain,analytic_status,analytic_value,analytic_case,"
               "numeric_status,numeric_value,numeric_error,stable,margin\n";
        out << (report.contains("input_echo") ? report["input_echo"].get<std::string>() : "")
            << ',' << (report.contains("domain") ? report["domain"].get<std::string>() : "") << ','
            << get("analytic", "status") << ',' << get("analytic", "value") << ','
            << get("analytic", "case") << ',' << get("numeric", "status") << ','
            << get("numeric", "value") << ',' << get("numeric", "abs_error_estimate") << ','
            << get("stability", "stable") << ',' << get("stability", "margin") << '\n';
        return out.str();
    }

    // text
    std::ostringstream out;
    std::function<void(const nlohmann::ordered_json&, int)> walk =
        [&](const nlohmann::ordered_json& node, int indent) {
            for (const auto& [key, value] : node.items()) {
                out << std::string(static_cast<size_t>(indent), ' ') << key << ": ";
                if (value.is_object()) {
                    out << '\n';
                    walk(value, indent + 2);
                } else {
                    out << value.dump() << '\n';
                }
            }
        };
    walk(report, 0);
    return out.str();
}

}  // namespace csbi
