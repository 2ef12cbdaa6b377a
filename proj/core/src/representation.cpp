#include "chisini/representation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chisini {

namespace {

RandomVariable from_atom_values(const SigmaAlgebra& sigma, const std::vector<double>& vals) {
    RandomVariable g = RandomVariable::zero(sigma.space_size());
    for (std::size_t k = 0; k < sigma.atom_count(); ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (sigma.atoms()[k].contains(i)) g[i] = vals[k];
    return g;
}

}  // namespace

double SignedMeasure::operator()(const Event& e) const {
    double s = 0.0;
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const Event& atom = sigma.atoms()[k];
        if (atom.subset_of(e)) s += atom_values[k];
        else if (!atom.disjoint(e))
            throw Error("signed measure evaluated on a non-measurable event");
    }
    return s;
}

double SignedMeasure::total() const {
    double s = 0.0;
    for (double v : atom_values) s += v;
    return s;
}

nlohmann::ordered_json to_json(const SignedMeasure& m) {
    nlohmann::ordered_json j;
    std::vector<std::uint64_t> masks;
    for (const Event& a : m.sigma.atoms()) masks.push_back(a.mask);
    j["atom_masks"] = masks;
    j["values"] = m.atom_values;
    return j;
}

std::string pi_g_case_name(const PiGClassification& c) {
    if (c.nonempty) return "nonempty";
    switch (c.empty_case) {
        case PiGEmptyCase::TwoNonNullAtoms: return "case_i";
        case PiGEmptyCase::OneNonNullAtom: return "case_ii";
        case PiGEmptyCase::OmegaNull: return "omega_null";
        default: return "none";
    }
}

PiGClassification classify_pi_g(const Functional& T, const SigmaAlgebra& sigma,
                                double tol_null) {
    const NullEventSet nulls = null_events(T, sigma, {}, tol_null);
    PiGClassification c;
    c.non_null_atoms = sigma.atom_count() - nulls.null_atoms.size();
    if (c.non_null_atoms >= 3) {
        c.nonempty = true;
        c.witness_partition = sigma;
    } else if (c.non_null_atoms == 2) {
        c.empty_case = PiGEmptyCase::TwoNonNullAtoms;
    } else if (c.non_null_atoms == 1) {
        c.empty_case = PiGEmptyCase::OneNonNullAtom;
    } else {
        c.empty_case = PiGEmptyCase::OmegaNull;
    }
    return c;
}

SignedMeasure v_measure(const Functional& T, const SigmaAlgebra& sigma,
                        const RandomVariable& g) {
    if (!T.representable())
        throw Error("no closed-form additive representation for this family");
    if (!is_measurable(g, sigma))
        throw Error("v_measure: g must be measurable");
    const double denom = T.utility(1.0) - T.utility(0.0);
    SignedMeasure m{sigma, std::vector<double>(sigma.atom_count(), 0.0)};
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < T.size(); ++i)
            if (sigma.atoms()[k].contains(i))
                s += T.weights()[i] * (T.utility(g[i]) - T.utility(0.0));
        m.atom_values[k] = s / denom;
    }
    return m;
}

SignedMeasure induced_probability(const Functional& T, const SigmaAlgebra& sigma) {
    SignedMeasure P = v_measure(T, sigma, RandomVariable::constant(T.size(), 1.0));
    double total = 0.0;
    for (double v : P.atom_values) {
        if (v < -1e-12)
            throw Error("induced probability is negative on an atom");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error("induced probability does not total 1");
    const NullEventSet nulls = null_events(T, sigma);
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const bool p_zero = std::abs(P.atom_values[k]) <= 1e-12;
        const bool null_atom = std::find(nulls.null_atoms.begin(), nulls.null_atoms.end(),
                                         k) != nulls.null_atoms.end();
        if (p_zero != null_atom)
            throw Error("induced probability and null events disagree on atom " +
                        std::to_string(k));
    }
    return P;
}

SignedMeasure v_bracket(const Functional& T, const RandomVariable& f,
                        const SigmaAlgebra& sigma, const BisectionConfig& cfg) {
    const ConditionalMeanResult sol = conditional_chisini(T, f, sigma, cfg);
    SignedMeasure m = v_measure(T, sigma, sol.g);

    // Second route through the discrete partition, where the conditional
    // mean is f itself: the coarse value on each atom must match the fine
    // atom sums (refinement consistency).
    const SignedMeasure fine = v_measure(T, SigmaAlgebra::discrete(T.size()), f);
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const double alt = fine(sigma.atoms()[k]);
        if (std::abs(alt - m.atom_values[k]) > 1e-8)
            throw Error("v_bracket: refinement routes disagree on atom " +
                        std::to_string(k));
    }
    return m;
}

SignAgreementReport check_order_preservation(const Functional& T, const SigmaAlgebra& sigma,
                                             const RandomVariable& f,
                                             std::size_t g_samples, std::uint64_t seed,
                                             double tol) {
    SignAgreementReport rep;
    const SignedMeasure vf = v_bracket(T, f, sigma);
    const std::vector<Event> events = generated_events(sigma);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-std::max(f.sup_norm(), 1.0),
                                               std::max(f.sup_norm(), 1.0));
    for (std::size_t s = 0; s < g_samples; ++s) {
        std::vector<double> vals(sigma.atom_count());
        for (double& v : vals) v = val(rng);
        const RandomVariable g = from_atom_values(sigma, vals);
        const SignedMeasure vg = v_measure(T, sigma, g);
        for (const Event& A : events) {
            const double lhs = T(restrict(f, A)) - T(restrict(g, A));
            const double rhs = vf(A) - vg(A);
            ++rep.comparisons;
            const bool bad = (lhs > tol && rhs < -tol) || (lhs < -tol && rhs > tol) ||
                             (std::abs(lhs) <= tol && std::abs(rhs) > 1e-6);
            if (bad) {
                rep.pass = false;
                rep.witness = nlohmann::ordered_json{
                    {"g", g.values}, {"A_mask", A.mask}, {"lhs", lhs}, {"rhs", rhs}};
                return rep;
            }
        }
    }
    return rep;
}

RefinementReport check_refinement_consistency(const Functional& T,
                                              const SigmaAlgebra& sigma_fine,
                                              const SigmaAlgebra& sigma_coarse,
                                              std::size_t g_samples, std::uint64_t seed,
                                              double tol) {
    if (!sigma_fine.refines(sigma_coarse))
        throw Error("check_refinement_consistency: fine does not refine coarse");
    RefinementReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (std::size_t s = 0; s < g_samples; ++s) {
        std::vector<double> vals(sigma_coarse.atom_count());
        for (double& v : vals) v = val(rng);
        const RandomVariable g = from_atom_values(sigma_coarse, vals);
        const SignedMeasure coarse = v_measure(T, sigma_coarse, g);
        const SignedMeasure fine = v_measure(T, sigma_fine, g);
        for (std::size_t k = 0; k < sigma_coarse.atom_count(); ++k) {
            const double diff = std::abs(coarse.atom_values[k] - fine(sigma_coarse.atoms()[k]));
            rep.max_diff = std::max(rep.max_diff, diff);
            ++rep.comparisons;
            if (diff > tol) rep.pass = false;
        }
    }
    return rep;
}

std::pair<Event, Event> hahn_decomposition(const SignedMeasure& mu) {
    Event pos = Event::none(mu.sigma.space_size());
    for (std::size_t k = 0; k < mu.sigma.atom_count(); ++k)
        if (mu.atom_values[k] >= 0.0) pos = pos.unite(mu.sigma.atoms()[k]);
    return {pos, pos.complement()};
}

std::optional<RandomVariable> increase_step(const Functional& T, const RandomVariable& f,
                                            const RandomVariable& g,
                                            const SigmaAlgebra& sigma,
                                            std::vector<double> epsilon_grid, double tol) {
    if (!is_measurable(g, sigma))
        throw Error("increase_step: g must be measurable");
    const std::vector<Event> events = generated_events(sigma);

    bool strict = false;
    for (const Event& A : events) {
        const double slack = T(restrict(f, A)) - T(restrict(g, A));
        if (slack < -tol)
            throw Error("increase_step: precondition violated on event mask " +
                        std::to_string(A.mask));
        if (slack > tol) strict = true;
    }
    if (!strict) return std::nullopt;

    const double norm = std::max(f.sup_norm(), 1e-12);
    if (epsilon_grid.empty())
        for (int j = 0; j <= 40; ++j) epsilon_grid.push_back(norm * std::pow(0.5, j));

    const SignedMeasure vf = v_bracket(T, f, sigma);
    for (double eps : epsilon_grid) {
        RandomVariable bumped = g;
        for (double& x : bumped.values) x += eps;
        SignedMeasure mu = v_measure(T, sigma, bumped);
        for (std::size_t k = 0; k < mu.atom_values.size(); ++k)
            mu.atom_values[k] = vf.atom_values[k] - mu.atom_values[k];
        const auto [omega0, rest] = hahn_decomposition(mu);
        (void)rest;
        if (omega0.empty() || !(mu(omega0) > 0.0)) continue;

        RandomVariable candidate = g;
        for (std::size_t i = 0; i < candidate.size(); ++i)
            if (omega0.contains(i)) candidate[i] += eps;
        bool ok = true;
        for (const Event& A : events)
            if (T(restrict(f, A)) < T(restrict(candidate, A)) - tol) { ok = false; break; }
        if (ok) return candidate;
    }
    return std::nullopt;
}

}  // namespace chisini
