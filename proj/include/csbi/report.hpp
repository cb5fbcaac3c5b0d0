#pragma once

#include <string>

#include <json.hpp>

namespace csbi {

struct CliOptions {
    std::string format = "json";       // json | text | csv
    double quad_tol = 1e-6;            // quadrature abs_tol
    double agree_tol = 1e-3;           // verification agreement tolerance
    double boundary_tol = 1e-9;        // zero classification tolerance
    std::string log_base = "internal"; // internal | natural | 2
    bool cancel = false;               // remove detected zero/pole pairs first
};

struct Outcome {
    nlohmann::ordered_json report;
    int exit_code = 0;
};

/// Exit codes: 0 success/agreement, 1 input error, 2 analytic non-finite,
/// 3 refused (hypothesis violation), 4 verification disagreement.
Outcome run_analyze(const std::string& tf_text, const CliOptions& opts);
Outcome run_verify(const std::string& tf_text, const CliOptions& opts);
Outcome run_parse(const std::string& tf_text, const CliOptions& opts);
Outcome run_identities(long count, unsigned long long seed, const CliOptions& opts);

/// Render a report as json / text / csv.
std::string render(const nlohmann::ordered_json& report, const std::string& format);

}  // namespace csbi
