#include "chisini/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chisini/functional.hpp"

namespace chisini {

namespace {

double atom_mass(const Event& atom, const std::vector<double>& weights) {
    double p = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (atom.contains(i)) p += weights[i];
    return p;
}

std::vector<double> conditional_weights(const Event& atom, const std::vector<double>& weights) {
    const double p = atom_mass(atom, weights);
    std::vector<double> w(weights.size(), 0.0);
    if (p <= 0.0) return w;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (atom.contains(i)) w[i] = weights[i] / p;
    return w;
}

void check_weights(const std::vector<double>& weights, std::size_t n) {
    if (weights.size() != n) throw ValidationError("risk: weight vector length mismatch");
    double s = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("risk: negative weight");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-10) throw ValidationError("risk: weights must sum to 1");
}

RandomVariable random_vector(std::mt19937_64& rng, std::size_t n, double half = 3.0) {
    std::uniform_real_distribution<double> d(-half, half);
    RandomVariable v = RandomVariable::zero(n);
    for (double& x : v.values) x = d(rng);
    return v;
}

RandomVariable spread(const SigmaAlgebra& sigma, const std::vector<double>& atom_vals) {
    RandomVariable v = RandomVariable::zero(sigma.space_size());
    for (std::size_t k = 0; k < sigma.atom_count(); ++k)
        for (std::size_t i = 0; i < v.size(); ++i)
            if (sigma.atoms()[k].contains(i)) v[i] = atom_vals[k];
    return v;
}

}  // namespace

ConditionalRiskMeasure ConditionalRiskMeasure::entropic(double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("entropic risk: gamma must be positive");
    ConditionalRiskMeasure rm;
    rm.family_ = RiskFamily::EntropicRM;
    rm.gamma_ = gamma;
    rm.label_ = "entropic";
    return rm;
}

ConditionalRiskMeasure ConditionalRiskMeasure::conditional_ev() {
    ConditionalRiskMeasure rm;
    rm.family_ = RiskFamily::ConditionalEV;
    rm.label_ = "conditional_ev";
    return rm;
}

ConditionalRiskMeasure ConditionalRiskMeasure::tabulated(AtomFn fn, std::string label) {
    if (!fn) throw ValidationError("tabulated risk: empty callback");
    ConditionalRiskMeasure rm;
    rm.family_ = RiskFamily::Tabulated;
    rm.fn_ = std::move(fn);
    rm.label_ = std::move(label);
    return rm;
}

double ConditionalRiskMeasure::atom_value(const RandomVariable& X, const Event& atom,
                                          const std::vector<double>& cond_weights) const {
    switch (family_) {
        case RiskFamily::EntropicRM: {
            std::vector<double> a(X.size());
            for (std::size_t i = 0; i < X.size(); ++i) a[i] = -gamma_ * X[i];
            return log_sum_exp(a, cond_weights) / gamma_;
        }
        case RiskFamily::ConditionalEV: {
            double s = 0.0;
            for (std::size_t i = 0; i < X.size(); ++i) s += cond_weights[i] * X[i];
            return -s;
        }
        case RiskFamily::Tabulated:
            return fn_(X, atom, cond_weights);
    }
    throw Error("unreachable risk family");
}

RandomVariable evaluate_conditional(const ConditionalRiskMeasure& rm,
                                    const RandomVariable& X, const SigmaAlgebra& sigma,
                                    const std::vector<double>& weights) {
    check_weights(weights, sigma.space_size());
    if (X.size() != sigma.space_size())
        throw ValidationError("evaluate_conditional: X length mismatch");
    std::vector<double> vals(sigma.atom_count(), 0.0);
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const Event& atom = sigma.atoms()[k];
        if (atom_mass(atom, weights) <= 0.0) continue;  // null atoms stay 0
        vals[k] = rm.atom_value(X, atom, conditional_weights(atom, weights));
    }
    return spread(sigma, vals);
}

bool RiskAxiomReport::all_pass() const {
    return std::all_of(items.begin(), items.end(),
                       [](const RiskCheckItem& i) { return i.pass; });
}

nlohmann::ordered_json to_json(const RiskAxiomReport& r) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const RiskCheckItem& item : r.items) {
        nlohmann::ordered_json e;
        e["name"] = item.name;
        e["verdict"] = item.pass ? "pass" : "fail";
        e["samples"] = item.samples;
        if (!item.witness.is_null()) e["witness"] = item.witness;
        j.push_back(e);
    }
    return j;
}

RiskAxiomReport check_conditional_axioms(const ConditionalRiskMeasure& rm,
                                         const SigmaAlgebra& sigma,
                                         const std::vector<double>& weights,
                                         std::uint64_t seed, std::size_t n_samples,
                                         double tol) {
    check_weights(weights, sigma.space_size());
    const std::size_t n = sigma.space_size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<bool> null_atom(sigma.atom_count());
    for (std::size_t k = 0; k < sigma.atom_count(); ++k)
        null_atom[k] = atom_mass(sigma.atoms()[k], weights) <= 0.0;
    auto max_gap_off_null = [&](const RandomVariable& a, const RandomVariable& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
            if (null_atom[k]) continue;
            for (std::size_t i = 0; i < n; ++i)
                if (sigma.atoms()[k].contains(i)) m = std::max(m, std::abs(a[i] - b[i]));
        }
        return m;
    };
    auto eval = [&](const RandomVariable& X) {
        return evaluate_conditional(rm, X, sigma, weights);
    };

    RiskAxiomReport rep;
    RiskCheckItem mono{"antitone"}, cash{"conditional_cash_additive"},
        convex{"conditional_convex"}, local{"locality"};

    for (std::size_t s = 0; s < n_samples; ++s) {
        const RandomVariable X1 = random_vector(rng, n);
        RandomVariable X2 = X1;
        for (double& x : X2.values) x += unit(rng) * 2.0;  // X2 >= X1

        // (i) X1 <= X2 implies rho(X1) >= rho(X2) atom-wise.
        const RandomVariable r1 = eval(X1), r2 = eval(X2);
        if (mono.pass)
            for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
                if (null_atom[k]) continue;
                const std::size_t i = sigma.atoms()[k].lowest();
                if (r2[i] > r1[i] + tol) {
                    mono.pass = false;
                    mono.witness = {{"X1", X1.values}, {"X2", X2.values}, {"atom", k}};
                }
            }

        // (ii) rho(X + c) = rho(X) - c for G-measurable c.
        std::vector<double> cvals(sigma.atom_count());
        for (double& c : cvals) c = unit(rng) * 4.0 - 2.0;
        const RandomVariable c = spread(sigma, cvals);
        RandomVariable shifted = X1;
        for (std::size_t i = 0; i < n; ++i) shifted[i] += c[i];
        RandomVariable expect = r1;
        for (std::size_t i = 0; i < n; ++i) expect[i] -= c[i];
        if (cash.pass && max_gap_off_null(eval(shifted), expect) > tol) {
            cash.pass = false;
            cash.witness = {{"X", X1.values}, {"c", c.values}};
        }

        // (iii) conditional convexity with G-measurable Lambda in [0,1].
        const RandomVariable Y = random_vector(rng, n);
        std::vector<double> lvals(sigma.atom_count());
        for (double& l : lvals) l = unit(rng);
        const RandomVariable lam = spread(sigma, lvals);
        RandomVariable mix = RandomVariable::zero(n);
        for (std::size_t i = 0; i < n; ++i) mix[i] = lam[i] * X1[i] + (1.0 - lam[i]) * Y[i];
        const RandomVariable rmix = eval(mix), ry = eval(Y);
        if (convex.pass)
            for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
                if (null_atom[k]) continue;
                const std::size_t i = sigma.atoms()[k].lowest();
                if (rmix[i] > lam[i] * r1[i] + (1.0 - lam[i]) * ry[i] + tol) {
                    convex.pass = false;
                    convex.witness = {{"X1", X1.values}, {"X2", Y.values},
                                      {"lambda", lvals}, {"atom", k}};
                }
            }

        // locality: rho(X 1_A) = rho(X) 1_A off null atoms.
        for (const Event& A : generated_events(sigma)) {
            if (!local.pass) break;
            const RandomVariable lhs = eval(restrict(X1, A));
            for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
                if (null_atom[k] || !sigma.atoms()[k].subset_of(A)) continue;
                const std::size_t i = sigma.atoms()[k].lowest();
                if (std::abs(lhs[i] - r1[i]) > tol) {
                    local.pass = false;
                    local.witness = {{"X", X1.values}, {"A_mask", A.mask}, {"atom", k}};
                }
            }
        }

        mono.samples = cash.samples = convex.samples = local.samples = s + 1;
        if (!mono.pass && !cash.pass && !convex.pass && !local.pass) break;
    }
    rep.items = {mono, cash, convex, local};
    return rep;
}

ScalarRiskFunctional scalarize(const ConditionalRiskMeasure& rm, const SigmaAlgebra& sigma,
                               const std::vector<double>& weights) {
    check_weights(weights, sigma.space_size());
    ScalarRiskFunctional rho0;
    rho0.space_size = sigma.space_size();
    rho0.provenance = "scalarized";
    rho0.eval = [rm, sigma, weights](const RandomVariable& X) {
        const RandomVariable r = evaluate_conditional(rm, X, sigma, weights);
        double s = 0.0;
        for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
            const Event& atom = sigma.atoms()[k];
            s += atom_mass(atom, weights) * r[atom.lowest()];
        }
        return s;
    };
    return rho0;
}

RiskAxiomReport check_scalarization_conditions(const ScalarRiskFunctional& rho0,
                                               const SigmaAlgebra& sigma,
                                               const std::vector<double>& weights,
                                               std::uint64_t seed, std::size_t n_samples,
                                               double tol) {
    check_weights(weights, sigma.space_size());
    const std::size_t n = sigma.space_size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RiskAxiomReport rep;
    RiskCheckItem translate{"translation_by_measurable"}, anti{"antitone"},
        pasting{"pasting"}, convex{"convexity_simple_lambda"};

    auto expectation = [&](const RandomVariable& Y) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += weights[i] * Y[i];
        return s;
    };

    for (std::size_t s = 0; s < n_samples; ++s) {
        const RandomVariable X = random_vector(rng, n);

        // 1. rho0(X + Y) = rho0(X) - E[Y] for G-measurable Y.
        std::vector<double> yvals(sigma.atom_count());
        for (double& y : yvals) y = unit(rng) * 4.0 - 2.0;
        const RandomVariable Y = spread(sigma, yvals);
        RandomVariable sum = X;
        for (std::size_t i = 0; i < n; ++i) sum[i] += Y[i];
        if (translate.pass &&
            std::abs(rho0(sum) - (rho0(X) - expectation(Y))) > tol) {
            translate.pass = false;
            translate.witness = {{"X", X.values}, {"Y", Y.values},
                                 {"lhs", rho0(sum)},
                                 {"rhs", rho0(X) - expectation(Y)}};
        }

        // 2. antitone: X <= Z implies rho0(X) >= rho0(Z).
        RandomVariable Z = X;
        for (double& z : Z.values) z += unit(rng) * 2.0;
        if (anti.pass && rho0(Z) > rho0(X) + tol) {
            anti.pass = false;
            anti.witness = {{"X", X.values}, {"Z", Z.values}};
        }

        // 4. convexity inequality over a sampled simple Lambda built on the
        //    atom partition: rho0(Lam X1 + (1-Lam) X2) <=
        //    sum_j lam_j rho0(X1 1_{A_j}) + (1-lam_j) rho0(X2 1_{A_j}).
        const RandomVariable X2 = random_vector(rng, n);
        std::vector<double> lvals(sigma.atom_count());
        for (double& l : lvals) l = unit(rng);
        const RandomVariable lam = spread(sigma, lvals);
        RandomVariable mix = RandomVariable::zero(n);
        for (std::size_t i = 0; i < n; ++i)
            mix[i] = lam[i] * X[i] + (1.0 - lam[i]) * X2[i];
        double rhs = 0.0;
        for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
            const Event& A = sigma.atoms()[k];
            rhs += lvals[k] * rho0(restrict(X, A)) +
                   (1.0 - lvals[k]) * rho0(restrict(X2, A));
        }
        if (convex.pass && rho0(mix) > rhs + tol) {
            convex.pass = false;
            convex.witness = {{"X1", X.values}, {"X2", X2.values}, {"lambda", lvals},
                              {"lhs", rho0(mix)}, {"rhs", rhs}};
        }

        translate.samples = anti.samples = convex.samples = s + 1;
    }

    // 3. pasting of the associated functional T(f) = rho0(-f), delegated to
    //    the axiom checker on a sampled f.
    {
        Functional T = Functional::tabulated(n, [rho0](const RandomVariable& f) {
            RandomVariable neg = f;
            for (double& x : neg.values) x = -x;
            return rho0.eval(neg);
        });
        std::mt19937_64 rng_ps(seed + 1);
        CheckOptions opts;
        opts.seed = seed;
        opts.n_samples = 64;
        const AxiomReport ps = check_g_ps(T, sigma, random_vector(rng_ps, n), opts);
        pasting.pass = ps.verdict != Verdict::Fail;
        pasting.samples = ps.samples_used;
        if (!pasting.pass) pasting.witness = ps.witness;
    }

    rep.items = {translate, anti, pasting, convex};
    return rep;
}

ConditionalRiskMeasure reconstruct_conditional(const ScalarRiskFunctional& rho0,
                                               const SigmaAlgebra& sigma,
                                               const std::vector<double>& weights,
                                               const BisectionConfig& cfg) {
    check_weights(weights, sigma.space_size());
    const std::size_t n = sigma.space_size();
    Functional T = Functional::tabulated(n, [rho0](const RandomVariable& f) {
        RandomVariable neg = f;
        for (double& x : neg.values) x = -x;
        return rho0.eval(neg);
    });

    struct Cache {
        std::mutex mu;
        std::map<std::vector<double>, std::vector<double>> values;
    };
    auto cache = std::make_shared<Cache>();

    return ConditionalRiskMeasure::tabulated(
        [T, sigma, cfg, cache](const RandomVariable& X, const Event& atom,
                               const std::vector<double>&) -> double {
            std::size_t idx = 0;
            for (; idx < sigma.atom_count(); ++idx)
                if (sigma.atoms()[idx].mask == atom.mask) break;
            if (idx == sigma.atom_count())
                throw Error("reconstructed risk measure queried off the atom partition");
            {
                std::lock_guard<std::mutex> lock(cache->mu);
                auto it = cache->values.find(X.values);
                if (it != cache->values.end()) return it->second[idx];
            }
            // rho_G(X) = g with g the conditional mean of -X under
            // T(f) = rho0(-f); then E[g 1_A] = T(-X 1_A) = rho0(X 1_A),
            // which is the locality identity pinning g down.
            RandomVariable f = X;
            for (double& x : f.values) x = -x;
            const ConditionalMeanResult sol = conditional_chisini(T, f, sigma, cfg);
            std::vector<double> vals(sol.atom_values);
            std::lock_guard<std::mutex> lock(cache->mu);
            auto [it, inserted] = cache->values.emplace(X.values, std::move(vals));
            (void)inserted;
            return it->second[idx];
        },
        "reconstructed");
}

nlohmann::ordered_json to_json(const RoundTripReport& r) {
    nlohmann::ordered_json j;
    j["residuals"] = r.residuals;
    j["max_residual"] = r.max_residual;
    j["pass"] = r.pass;
    return j;
}

RoundTripReport risk_round_trip(const ConditionalRiskMeasure& rm, const SigmaAlgebra& sigma,
                                const std::vector<double>& weights,
                                std::size_t n_samples, std::uint64_t seed, double tol) {
    const ScalarRiskFunctional rho0 = scalarize(rm, sigma, weights);
    const ConditionalRiskMeasure rebuilt = reconstruct_conditional(rho0, sigma, weights);

    std::vector<bool> null_atom(sigma.atom_count());
    for (std::size_t k = 0; k < sigma.atom_count(); ++k)
        null_atom[k] = atom_mass(sigma.atoms()[k], weights) <= 0.0;

    RoundTripReport rep;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const RandomVariable X = random_vector(rng, sigma.space_size());
        const RandomVariable a = evaluate_conditional(rm, X, sigma, weights);
        const RandomVariable b = evaluate_conditional(rebuilt, X, sigma, weights);
        double r = 0.0;
        for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
            if (null_atom[k]) continue;
            const std::size_t i = sigma.atoms()[k].lowest();
            r = std::max(r, std::abs(a[i] - b[i]));
        }
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

}  // namespace chisini
