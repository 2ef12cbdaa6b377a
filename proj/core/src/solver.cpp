#include "chisini/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chisini {

double chisini_mean(const Functional& T, const RandomVariable& f,
                    const BisectionConfig& cfg) {
    const double bound = std::max(f.sup_norm(), 1.0);
    const ScalarSection sec = scalar_section(T, Event::all(f.size()));
    if (sec(bound) - sec(-bound) <= cfg.tol_f)
        throw Error("chisini_mean: degenerate functional (flat global section)");
    const BisectResult r = bisect_scalar(sec, T(f), -bound, bound, cfg);
    return r.x;
}

ResidualReport verify_system(const Functional& T, const RandomVariable& f,
                             const RandomVariable& g, const SigmaAlgebra& sigma,
                             std::size_t cap, std::uint64_t seed) {
    if (!is_measurable(g, sigma))
        throw Error("verify_system: g is not measurable");
    ResidualReport rep;
    auto record = [&](const Event& e) {
        const double r = std::abs(T(restrict(f, e)) - T(restrict(g, e)));
        rep.per_event[e.mask] = r;
        if (r > rep.max_residual) { rep.max_residual = r; rep.worst_event = e.mask; }
    };

    const std::size_t k = sigma.atom_count();
    if (k <= cap) {
        for (const Event& e : generated_events(sigma, cap)) record(e);
        return rep;
    }

    // Beyond the cap: all atoms, all atom pairs, plus 256 random unions.
    rep.sampled = true;
    for (const Event& a : sigma.atoms()) record(a);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            record(sigma.atoms()[i].unite(sigma.atoms()[j]));
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (int s = 0; s < 256; ++s) {
        Event e = Event::none(sigma.space_size());
        for (const Event& a : sigma.atoms())
            if (coin(rng)) e = e.unite(a);
        record(e);
    }
    return rep;
}

ConditionalMeanResult conditional_chisini(const Functional& T, const RandomVariable& f,
                                          const SigmaAlgebra& sigma,
                                          const BisectionConfig& cfg, double tol_solve) {
    if (f.size() != T.size() || sigma.space_size() != T.size())
        throw Error("conditional_chisini: size mismatch");
    const double bound = f.sup_norm();
    // Flatness over a degenerate bracket is meaningless; probe at least
    // [-1, 1]. Monotone sections keep the root inside [-|f|, |f|].
    const double probe = std::max(bound, 1.0);
    ConditionalMeanResult res;
    res.g = RandomVariable::zero(f.size());
    res.atom_values.resize(sigma.atom_count());
    res.iterations_per_atom.resize(sigma.atom_count());

    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const Event& atom = sigma.atoms()[k];
        const ScalarSection sec = scalar_section(T, atom);
        BisectResult br;
        try {
            br = bisect_scalar(sec, T(restrict(f, atom)), -probe, probe, cfg);
        } catch (const Error& e) {
            throw Error("conditional_chisini: atom " + std::to_string(k) +
                        " failed: " + e.what());
        }
        if (br.flat) res.null_atoms.push_back(k);
        const double x = std::clamp(br.x, -bound, bound);
        res.atom_values[k] = x;
        res.iterations_per_atom[k] = br.iterations;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (atom.contains(i)) res.g[i] = x;
    }

    // Flat-section detection vs the grid-based null classification: a
    // mismatch is a warning, not an error.
    const NullEventSet grid_nulls = null_events(T, sigma, {}, 1e-10, std::max(bound, 1.0));
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const bool flat = std::find(res.null_atoms.begin(), res.null_atoms.end(), k) !=
                          res.null_atoms.end();
        const bool grid_null = std::find(grid_nulls.null_atoms.begin(),
                                         grid_nulls.null_atoms.end(),
                                         k) != grid_nulls.null_atoms.end();
        if (flat != grid_null)
            res.warnings.push_back("atom " + std::to_string(k) +
                                   ": flat-section flag and null-event grid disagree");
    }

    res.residuals = verify_system(T, f, res.g, sigma);
    res.max_residual = res.residuals.max_residual;
    if (res.max_residual > tol_solve)
        throw Error("conditional_chisini: pasting violated, all atoms solved but "
                    "event mask " + std::to_string(res.residuals.worst_event) +
                    " keeps residual " + std::to_string(res.max_residual) +
                    " (functional likely fails (G-PS)/(G-QL))");
    return res;
}

UniquenessVerdict uniqueness_check(const Functional& T, const RandomVariable& g1,
                                   const RandomVariable& g2, const SigmaAlgebra& sigma,
                                   const NullEventSet& null_set, double tol_eq) {
    (void)T;
    UniquenessVerdict v;
    v.pass = true;
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const Event& atom = sigma.atoms()[k];
        bool differs = false;
        for (std::size_t i = 0; i < g1.size(); ++i)
            if (atom.contains(i) && std::abs(g1[i] - g2[i]) > tol_eq) differs = true;
        if (differs && !null_set.is_null(atom)) {
            v.pass = false;
            v.offending_atom = k;
            return v;
        }
    }
    return v;
}

TowerLocalityReport tower_and_locality_checks(const Functional& T, const RandomVariable& f,
                                              const SigmaAlgebra& sigma_fine,
                                              const SigmaAlgebra& sigma_coarse,
                                              double tol_eq) {
    if (!sigma_fine.refines(sigma_coarse))
        throw Error("tower_and_locality_checks: fine sigma does not refine coarse");
    const NullEventSet nulls = null_events(T, sigma_coarse);
    TowerLocalityReport rep;

    auto max_diff_off_null = [&](const RandomVariable& a, const RandomVariable& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < sigma_coarse.atom_count(); ++k) {
            if (nulls.is_null(sigma_coarse.atoms()[k])) continue;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (sigma_coarse.atoms()[k].contains(i))
                    m = std::max(m, std::abs(a[i] - b[i]));
        }
        return m;
    };

    // (a) tower: conditioning the fine mean on the coarse sigma matches
    // conditioning f directly.
    const RandomVariable fine_g = conditional_chisini(T, f, sigma_fine).g;
    const RandomVariable towered = conditional_chisini(T, fine_g, sigma_coarse).g;
    const RandomVariable direct = conditional_chisini(T, f, sigma_coarse).g;
    rep.tower_max_diff = max_diff_off_null(towered, direct);
    rep.tower_pass = rep.tower_max_diff <= tol_eq;

    // (b) locality: mean of f 1_A equals (mean of f) 1_A off null atoms,
    // for every coarse-measurable A.
    rep.locality_pass = true;
    for (const Event& A : generated_events(sigma_coarse)) {
        const RandomVariable lhs = conditional_chisini(T, restrict(f, A), sigma_coarse).g;
        const RandomVariable rhs = restrict(direct, A);
        double m = 0.0;
        for (std::size_t k = 0; k < sigma_coarse.atom_count(); ++k) {
            const Event& atom = sigma_coarse.atoms()[k];
            if (nulls.is_null(atom) || !atom.subset_of(A)) continue;
            for (std::size_t i = 0; i < lhs.size(); ++i)
                if (atom.contains(i)) m = std::max(m, std::abs(lhs[i] - rhs[i]));
        }
        rep.locality_max_diff = std::max(rep.locality_max_diff, m);
        if (m > tol_eq) rep.locality_pass = false;
    }

    // (c) monotonicity: a pointwise-dominating input gives atom values at
    // least as large (checked against f + 1).
    RandomVariable f2 = f;
    for (double& x : f2.values) x += 1.0;
    const auto r1 = conditional_chisini(T, f, sigma_coarse);
    const auto r2 = conditional_chisini(T, f2, sigma_coarse);
    rep.monotone_pass = true;
    for (std::size_t k = 0; k < sigma_coarse.atom_count(); ++k) {
        if (nulls.is_null(sigma_coarse.atoms()[k])) continue;
        if (r2.atom_values[k] < r1.atom_values[k] - tol_eq) rep.monotone_pass = false;
    }
    return rep;
}

nlohmann::ordered_json to_json(const ConditionalMeanResult& r) {
    nlohmann::ordered_json j;
    j["atom_values"] = r.atom_values;
    j["null_atoms"] = r.null_atoms;
    j["max_residual"] = r.max_residual;
    nlohmann::ordered_json residuals;
    for (const auto& [mask, value] : r.residuals.per_event)
        residuals[std::to_string(mask)] = value;
    j["residuals"] = residuals;
    j["iterations"] = r.iterations_per_atom;
    if (r.residuals.sampled) j["sampled_verification"] = true;
    return j;
}

}  // namespace chisini
