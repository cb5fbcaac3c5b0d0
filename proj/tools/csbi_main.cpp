#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "csbi/report.hpp"

namespace {

void add_common_flags(CLI::App* cmd, csbi::CliOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "text", "csv"}))
        ->capture_default_str();
    cmd->add_option("--boundary-tol", opts.boundary_tol, "Zero classification tolerance")
        ->capture_default_str();
    cmd->add_option("--log-base", opts.log_base, "Presentation log base")
        ->check(CLI::IsMember({"internal", "natural", "2"}))
        ->capture_default_str();
    cmd->add_flag("--cancel", opts.cancel, "Remove detected zero/pole cancellations first");
}

int emit(const csbi::Outcome& outcome, const csbi::CliOptions& opts) {
    const std::string text = csbi::render(outcome.report, opts.format);
    if (outcome.exit_code == 1)
        std::cerr << text << std::endl;
    else
        std::cout << text << std::endl;
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complementary sensitivity Bode integrals of feedback loops, "
                 "analytic and numerically verified"};
    app.require_subcommand(1);

    csbi::CliOptions opts;
    std::string tf_text;
    long id_count = 100;
    unsigned long long id_seed = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "Analytic pipeline only");
    analyze->add_option("tf", tf_text, "Transfer function text")->required();
    add_common_flags(analyze, opts);

    CLI::App* verify = app.add_subcommand("verify", "Analytic pipeline plus quadrature oracle");
    verify->add_option("tf", tf_text, "Transfer function text")->required();
    add_common_flags(verify, opts);
    verify->add_option("--tol", opts.quad_tol, "Quadrature absolute tolerance")
        ->capture_default_str();
    verify->add_option("--agree-tol", opts.agree_tol, "Verification agreement tolerance")
        ->capture_default_str();

    CLI::App* parse = app.add_subcommand("parse", "Parse and echo the loop structure");
    parse->add_option("tf", tf_text, "Transfer function text")->required();
    add_common_flags(parse, opts);

    CLI::App* identities = app.add_subcommand(
        "identities", "Randomized analytic-vs-numeric identity sweep");
    identities->add_option("--count", id_count, "Cases per identity")->capture_default_str();
    identities->add_option("--seed", id_seed, "RNG seed")->capture_default_str();
    identities->add_option("--tol", opts.quad_tol, "Quadrature absolute tolerance")
        ->capture_default_str();
    add_common_flags(identities, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (analyze->parsed()) return emit(csbi::run_analyze(tf_text, opts), opts);
    if (verify->parsed()) return emit(csbi::run_verify(tf_text, opts), opts);
    if (parse->parsed()) return emit(csbi::run_parse(tf_text, opts), opts);
    return emit(csbi::run_identities(id_count, id_seed, opts), opts);
}
