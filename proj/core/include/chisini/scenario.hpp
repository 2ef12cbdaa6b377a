#ifndef CHISINI_SCENARIO_HPP
#define CHISINI_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chisini/functional.hpp"
#include "chisini/risk.hpp"
#include "chisini/space.hpp"

namespace chisini {

/// A self-contained problem instance: space, conditioning partition,
/// functional, input vector, optional risk block, options. Parsed and
/// validated from a JSON document with schema version field "v": 1.
struct Scenario {
    FiniteSpace space;
    SigmaAlgebra sigma;
    std::optional<Functional> functional;
    RandomVariable f;

    // risk block, when present
    std::optional<ConditionalRiskMeasure> risk;
    std::optional<ScalarRiskFunctional> user_rho0;  // bare rho0 fixtures

    // options (CLI flags override seed and tol)
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::size_t n_samples = 200;
    std::vector<double> x_grid;  // empty selects the default null-test grid

    Scenario() : space({"_"}), sigma(SigmaAlgebra::trivial(1)) {}
};

/// Throws ValidationError on any schema or cross-reference problem.
Scenario parse_scenario(const nlohmann::ordered_json& doc);
Scenario load_scenario(const std::string& path);

struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = 0;  // 0 ok, 2 computation/axiom failure (3 is reserved
                        // for validation and raised before any run_*)
};

RunResult run_solve(const Scenario& s);
RunResult run_check_axioms(const Scenario& s);
RunResult run_represent(const Scenario& s);
RunResult run_risk_roundtrip(const Scenario& s);

/// Plain-text rendering of a report produced by the run_* functions; the
/// text view is derived from the JSON, never computed separately.
std::string render_text(const nlohmann::ordered_json& report);

}  // namespace chisini

#endif
