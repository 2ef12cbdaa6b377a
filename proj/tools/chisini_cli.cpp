// Command-line front end: scenario in, JSON or text report out.
// Exit codes: 0 success, 2 computation/axiom failure, 3 validation failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chisini/scenario.hpp"

namespace {

struct CommonArgs {
    std::string scenario_path;
    bool as_json = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")->required();
    cmd->add_flag("--json", args.as_json, "Emit the JSON report instead of text");
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--tol", args.tol, "Override the scenario tolerance");
}

int run(const CommonArgs& args,
        chisini::RunResult (*fn)(const chisini::Scenario&)) {
    chisini::Scenario s;
    try {
        s = chisini::load_scenario(args.scenario_path);
    } catch (const chisini::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    }
    if (args.seed) s.seed = *args.seed;
    if (args.tol) s.tol = *args.tol;
    try {
        const chisini::RunResult r = fn(s);
        if (args.as_json)
            std::cout << r.report.dump(2) << "\n";
        else
            std::cout << chisini::render_text(r.report);
        return r.exit_code;
    } catch (const chisini::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const chisini::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional Chisini means: solver, axiom checks, additive "
                 "representation, risk scalarization round-trip"};
    app.require_subcommand(1);

    CommonArgs solve_args, axioms_args, repr_args, risk_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve for the conditional mean");
    add_common(solve, solve_args);
    CLI::App* axioms = app.add_subcommand("check-axioms", "Run the axiom suite");
    add_common(axioms, axioms_args);
    CLI::App* repr = app.add_subcommand("represent", "Additive representation report");
    add_common(repr, repr_args);
    CLI::App* risk = app.add_subcommand("risk-roundtrip",
                                        "Scalarize, verify, reconstruct");
    add_common(risk, risk_args);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return run(solve_args, chisini::run_solve);
    if (axioms->parsed()) return run(axioms_args, chisini::run_check_axioms);
    if (repr->parsed()) return run(repr_args, chisini::run_represent);
    return run(risk_args, chisini::run_risk_roundtrip);
}
