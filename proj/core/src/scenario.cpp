#include "chisini/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "chisini/axioms.hpp"
#include "chisini/representation.hpp"
#include "chisini/solver.hpp"

namespace chisini {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> to_doubles(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + " must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) throw ValidationError(what + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Functional parse_functional(const json& jf, std::vector<double> weights) {
    if (!jf.is_object() || !jf.contains("family"))
        throw ValidationError("functional block must name a family");
    const std::string family = jf.at("family").get<std::string>();
    if (family == "linear") return Functional::linear(std::move(weights));
    if (family == "entropic") {
        if (!jf.contains("gamma")) throw ValidationError("entropic functional needs gamma");
        return Functional::entropic(std::move(weights), jf.at("gamma").get<double>());
    }
    if (family == "quasi_arithmetic") {
        const std::string u = jf.value("utility", "exp");
        if (u == "exp")
            return Functional::quasi_arithmetic(std::move(weights),
                                                [](double x) { return std::exp(x); },
                                                [](double y) { return std::log(y); }, "exp");
        if (u == "cubic")
            return Functional::quasi_arithmetic(std::move(weights),
                                                [](double x) { return x * x * x + x; },
                                                {}, "cubic");
        if (u == "arctan_affine")
            return Functional::quasi_arithmetic(std::move(weights),
                                                [](double x) { return x + 0.5 * std::atan(x); },
                                                {}, "arctan_affine");
        throw ValidationError("unknown utility: " + u);
    }
    if (family == "choquet") {
        const std::string d = jf.value("distortion", "square");
        if (d == "square")
            return Functional::choquet(std::move(weights),
                                       [](double t) { return t * t; }, "square");
        if (d == "sqrt")
            return Functional::choquet(std::move(weights),
                                       [](double t) { return std::sqrt(t); }, "sqrt");
        throw ValidationError("unknown distortion: " + d);
    }
    throw ValidationError("unknown functional family: " + family);
}

json event_masks(const SigmaAlgebra& sigma) {
    json a = json::array();
    for (const Event& e : sigma.atoms()) a.push_back(e.mask);
    return a;
}

json header(const char* command, const Scenario& s) {
    json j;
    j["command"] = command;
    j["v"] = 1;
    j["seed"] = s.seed;
    j["tol"] = s.tol;
    return j;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
    if (doc.value("v", 0) != 1) throw ValidationError("unsupported scenario version");
    if (!doc.contains("space") || !doc.contains("sigma") || !doc.contains("f"))
        throw ValidationError("scenario needs space, sigma and f");

    const json& jspace = doc.at("space");
    if (!jspace.contains("outcomes"))
        throw ValidationError("space block needs outcomes");
    std::vector<std::string> outcomes;
    for (const auto& o : jspace.at("outcomes")) outcomes.push_back(o.get<std::string>());

    std::optional<std::vector<double>> weights;
    if (jspace.contains("weights"))
        weights = to_doubles(jspace.at("weights"), "space.weights");

    Scenario s;
    s.space = FiniteSpace(outcomes, weights);

    const json& jsigma = doc.at("sigma");
    if (!jsigma.contains("labels"))
        throw ValidationError("sigma block needs labels");
    std::vector<std::string> labels;
    for (const auto& l : jsigma.at("labels")) labels.push_back(l.get<std::string>());
    s.sigma = partition_from_labels(s.space, labels);

    s.f = RandomVariable(to_doubles(doc.at("f"), "f"));
    if (s.f.size() != s.space.size())
        throw ValidationError("f length does not match the outcome count");

    if (doc.contains("functional")) {
        if (!s.space.has_weights())
            throw ValidationError("functional requires space.weights");
        s.functional = parse_functional(doc.at("functional"), s.space.weights());
    }

    if (doc.contains("risk")) {
        const json& jr = doc.at("risk");
        const std::string family = jr.value("family", "");
        if (family == "entropic") {
            s.risk = ConditionalRiskMeasure::entropic(jr.value("gamma", 1.0));
        } else if (family == "conditional_ev") {
            s.risk = ConditionalRiskMeasure::conditional_ev();
        } else if (family == "cubed_ev") {
            // deliberate convexity violator: rho(X) = -(E[X|G])^3
            s.risk = ConditionalRiskMeasure::tabulated(
                [](const RandomVariable& X, const Event&, const std::vector<double>& w) {
                    double m = 0.0;
                    for (std::size_t i = 0; i < X.size(); ++i) m += w[i] * X[i];
                    return -m * m * m;
                },
                "cubed_ev");
        } else if (family == "variance_rho0") {
            // bare scalar fixture: rho0(X) = -E[X] + 0.1 Var(X); the variance
            // term breaks translation by measurable shifts.
            if (!s.space.has_weights())
                throw ValidationError("variance_rho0 requires space.weights");
            const std::vector<double> w = s.space.weights();
            ScalarRiskFunctional rho0;
            rho0.space_size = s.space.size();
            rho0.provenance = "user";
            rho0.eval = [w](const RandomVariable& X) {
                double m = 0.0, m2 = 0.0;
                for (std::size_t i = 0; i < X.size(); ++i) {
                    m += w[i] * X[i];
                    m2 += w[i] * X[i] * X[i];
                }
                return -m + 0.1 * (m2 - m * m);
            };
            s.user_rho0 = rho0;
        } else {
            throw ValidationError("unknown risk family: " + family);
        }
    }

    if (doc.contains("options")) {
        const json& jo = doc.at("options");
        s.seed = jo.value("seed", std::uint64_t{0});
        s.tol = jo.value("tol", 1e-8);
        s.n_samples = jo.value("n_samples", std::size_t{200});
        if (jo.contains("x_grid")) {
            s.x_grid = to_doubles(jo.at("x_grid"), "options.x_grid");
            if (s.x_grid.empty())
                throw ValidationError("options.x_grid must not be empty");
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
        return parse_scenario(doc);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario schema error: ") + e.what());
    }
}

RunResult run_solve(const Scenario& s) {
    if (!s.functional) throw ValidationError("solve requires a functional block");
    RunResult out;
    out.report = header("solve", s);
    try {
        const ConditionalMeanResult r =
            conditional_chisini(*s.functional, s.f, s.sigma, {}, s.tol);
        out.report["status"] = "ok";
        out.report["atoms"] = event_masks(s.sigma);
        out.report["result"] = to_json(r);
        if (!r.warnings.empty()) out.report["warnings"] = r.warnings;
    } catch (const Error& e) {
        out.report["status"] = "error";
        out.report["error"] = e.what();
        out.exit_code = 2;
    }
    return out;
}

RunResult run_check_axioms(const Scenario& s) {
    if (!s.functional) throw ValidationError("check-axioms requires a functional block");
    RunResult out;
    out.report = header("check-axioms", s);
    CheckOptions opts;
    opts.seed = s.seed;
    opts.n_samples = s.n_samples;
    const std::vector<AxiomReport> reports = check_all(*s.functional, s.sigma, s.f, opts);
    json rows = json::array();
    bool any_fail = false;
    for (const AxiomReport& r : reports) {
        rows.push_back(to_json(r));
        if (r.verdict == Verdict::Fail) any_fail = true;
    }
    out.report["status"] = any_fail ? "fail" : "ok";
    out.report["axioms"] = rows;
    out.exit_code = any_fail ? 2 : 0;
    return out;
}

RunResult run_represent(const Scenario& s) {
    if (!s.functional) throw ValidationError("represent requires a functional block");
    RunResult out;
    out.report = header("represent", s);
    const Functional& T = *s.functional;
    try {
        const PiGClassification cls = classify_pi_g(T, s.sigma);
        out.report["pi_g"] = pi_g_case_name(cls);
        out.report["non_null_atoms"] = cls.non_null_atoms;

        if (!T.representable()) {
            out.report["status"] = "skipped";
            out.report["note"] = "no additive closed form for this functional family";
            return out;
        }
        if (!cls.nonempty) {
            out.report["status"] = "skipped";
            out.report["note"] =
                "additive representation needs at least three non-null atoms";
            return out;
        }

        out.report["atoms"] = event_masks(s.sigma);
        out.report["induced_probability"] = to_json(induced_probability(T, s.sigma))["values"];
        out.report["v_of_f"] = to_json(v_bracket(T, s.f, s.sigma))["values"];

        const SignAgreementReport order =
            check_order_preservation(T, s.sigma, s.f, 20, s.seed);
        const RefinementReport refine = check_refinement_consistency(
            T, SigmaAlgebra::discrete(s.space.size()), s.sigma, 20, s.seed);
        out.report["order_preserving"] = order.pass;
        out.report["refinement_consistent"] = refine.pass;
        out.report["refinement_max_diff"] = refine.max_diff;
        const bool ok = order.pass && refine.pass;
        out.report["status"] = ok ? "ok" : "fail";
        out.exit_code = ok ? 0 : 2;
    } catch (const Error& e) {
        out.report["status"] = "error";
        out.report["error"] = e.what();
        out.exit_code = 2;
    }
    return out;
}

RunResult run_risk_roundtrip(const Scenario& s) {
    if (!s.risk && !s.user_rho0)
        throw ValidationError("risk-roundtrip requires a risk block");
    if (!s.space.has_weights())
        throw ValidationError("risk-roundtrip requires space.weights");
    RunResult out;
    out.report = header("risk-roundtrip", s);
    const std::vector<double>& w = s.space.weights();
    try {
        ScalarRiskFunctional rho0;
        if (s.risk) {
            const RiskAxiomReport ax = check_conditional_axioms(*s.risk, s.sigma, w, s.seed);
            out.report["conditional_axioms"] = to_json(ax);
            rho0 = scalarize(*s.risk, s.sigma, w);
        } else {
            rho0 = *s.user_rho0;
        }

        const RiskAxiomReport cond =
            check_scalarization_conditions(rho0, s.sigma, w, s.seed);
        out.report["scalarization_conditions"] = to_json(cond);
        if (!cond.all_pass()) {
            out.report["status"] = "fail";
            out.report["note"] = "reconstruction skipped: scalarization conditions fail";
            out.exit_code = 2;
            return out;
        }

        if (s.risk) {
            const RoundTripReport rt =
                risk_round_trip(*s.risk, s.sigma, w, 20, s.seed, std::max(s.tol, 1e-8));
            out.report["round_trip"] = to_json(rt);
            out.report["status"] = rt.pass ? "ok" : "fail";
            out.exit_code = rt.pass ? 0 : 2;
        } else {
            // bare rho0 with all conditions passing: reconstruct and report
            // the re-scalarization residual over sampled X.
            const ConditionalRiskMeasure rebuilt =
                reconstruct_conditional(rho0, s.sigma, w);
            std::mt19937_64 rng(s.seed);
            std::uniform_real_distribution<double> d(-3.0, 3.0);
            double max_res = 0.0;
            for (int t = 0; t < 20; ++t) {
                RandomVariable X = RandomVariable::zero(s.space.size());
                for (double& x : X.values) x = d(rng);
                const RandomVariable r = evaluate_conditional(rebuilt, X, s.sigma, w);
                double e = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) e += w[i] * r[i];
                max_res = std::max(max_res, std::abs(e - rho0(X)));
            }
            out.report["rescalarization_max_residual"] = max_res;
            const bool ok = max_res <= std::max(s.tol, 1e-8);
            out.report["status"] = ok ? "ok" : "fail";
            out.exit_code = ok ? 0 : 2;
        }
    } catch (const Error& e) {
        out.report["status"] = "error";
        out.report["error"] = e.what();
        out.exit_code = 2;
    }
    return out;
}

namespace {

void render_value(std::ostringstream& os, const json& v) {
    os << v.dump();
}

}  // namespace

std::string render_text(const json& report) {
    std::ostringstream os;
    os << "== " << report.value("command", "?") << " ==\n";
    for (const auto& [key, value] : report.items()) {
        if (key == "command") continue;
        if (key == "axioms" && value.is_array()) {
            os << "axioms:\n";
            for (const auto& row : value) {
                os << "  " << row.value("axiom", "?") << "  "
                   << row.value("verdict", "?");
                if (row.contains("witness")) os << "  witness=" << row.at("witness").dump();
                os << "\n";
            }
            continue;
        }
        if ((key == "conditional_axioms" || key == "scalarization_conditions") &&
            value.is_array()) {
            os << key << ":\n";
            for (const auto& row : value) {
                os << "  " << row.value("name", "?") << "  " << row.value("verdict", "?");
                if (row.contains("witness")) os << "  witness=" << row.at("witness").dump();
                os << "\n";
            }
            continue;
        }
        os << key << ": ";
        render_value(os, value);
        os << "\n";
    }
    return os.str();
}

}  // namespace chisini
