#include "chisini/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chisini {

namespace {

using json = nlohmann::ordered_json;

RandomVariable from_atom_values(const SigmaAlgebra& sigma, const std::vector<double>& vals) {
    RandomVariable g = RandomVariable::zero(sigma.space_size());
    for (std::size_t k = 0; k < sigma.atom_count(); ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (sigma.atoms()[k].contains(i)) g[i] = vals[k];
    return g;
}

/// g1 * 1_A + tail * 1_{Omega \ A}
RandomVariable splice(const RandomVariable& on, const Event& A, const RandomVariable& off) {
    RandomVariable out = off;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (A.contains(i)) out[i] = on[i];
    return out;
}

bool exhaustive_mode(const SigmaAlgebra& sigma, const CheckOptions& opts) {
    return sigma.space_size() <= opts.exhaustive_max_outcomes &&
           !opts.grid.empty() && opts.grid.size() <= 5;
}

/// Calls fn(values) for every tuple in grid^k.
template <typename Fn>
void for_each_grid(std::size_t k, const std::vector<double>& grid, Fn&& fn) {
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> vals(k, k ? grid[0] : 0.0);
    while (true) {
        fn(vals);
        std::size_t j = 0;
        for (; j < k; ++j) {
            if (++idx[j] < grid.size()) { vals[j] = grid[idx[j]]; break; }
            idx[j] = 0;
            vals[j] = grid[0];
        }
        if (j == k) break;
    }
}

json event_json(const Event& e) { return json{{"mask", e.mask}, {"size", e.space_size}}; }

json vec_json(const std::vector<double>& v) { return json(v); }

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Vacuous: return "vacuous";
    }
    return "?";
}

json to_json(const AxiomReport& r) {
    json j;
    j["axiom"] = r.axiom;
    j["verdict"] = verdict_name(r.verdict);
    if (!r.witness.is_null()) j["witness"] = r.witness;
    j["samples"] = r.samples_used;
    j["tolerance"] = r.tolerance;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

NullEventSet null_events(const Functional& T, const SigmaAlgebra& sigma,
                         std::vector<double> x_grid, double tol_null,
                         double context_norm) {
    if (x_grid.empty())
        x_grid = {1.0, -1.0, 0.5, -0.5, context_norm, -context_norm};
    NullEventSet out;
    out.sigma = sigma;
    out.x_grid = x_grid;
    for (std::size_t k = 0; k < sigma.atom_count(); ++k) {
        const ScalarSection sec = scalar_section(T, sigma.atoms()[k]);
        bool null_atom = true;
        for (double x : x_grid)
            if (std::abs(sec(x)) > tol_null) { null_atom = false; break; }
        if (null_atom) {
            out.null_atoms.push_back(k);
            out.null_mask |= sigma.atoms()[k].mask;
        }
    }
    return out;
}

AxiomReport check_g_mo(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts) {
    AxiomReport rep{.axiom = "G-Mo", .tolerance = opts.tol_strict};
    const NullEventSet nulls = null_events(T, sigma, {}, opts.tol_null, opts.value_bound);
    std::vector<Event> events;
    for (const Event& e : generated_events(sigma))
        if (!e.empty() && !nulls.is_null(e)) events.push_back(e);
    if (events.empty()) {
        rep.verdict = Verdict::Vacuous;
        rep.note = "no non-null events";
        return rep;
    }

    auto probe = [&](double x, double y, const RandomVariable& tail, const Event& A) -> bool {
        const double lo = T(splice(RandomVariable::constant(T.size(), x), A, tail));
        const double hi = T(splice(RandomVariable::constant(T.size(), y), A, tail));
        ++rep.samples_used;
        if (hi - lo <= opts.tol_strict) {
            rep.verdict = Verdict::Fail;
            rep.witness = json{{"x", x}, {"y", y}, {"A", event_json(A)},
                               {"tail", vec_json(tail.values)},
                               {"T_low", lo}, {"T_high", hi}, {"margin", hi - lo}};
            return false;
        }
        return true;
    };

    if (exhaustive_mode(sigma, opts)) {
        for (const Event& A : events)
            for (std::size_t i = 0; i < opts.grid.size(); ++i)
                for (std::size_t j = i + 1; j < opts.grid.size(); ++j) {
                    bool ok = true;
                    for_each_grid(sigma.atom_count(), opts.grid, [&](const std::vector<double>& tv) {
                        if (!ok) return;
                        ok = probe(opts.grid[i], opts.grid[j], from_atom_values(sigma, tv), A);
                    });
                    if (!ok) return rep;
                }
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> val(-opts.value_bound, opts.value_bound);
        std::uniform_real_distribution<double> gap(0.1, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, events.size() - 1);
        for (std::size_t s = 0; s < opts.n_samples; ++s) {
            const double x = val(rng), y = x + gap(rng);
            std::vector<double> tv(sigma.atom_count());
            for (double& v : tv) v = val(rng);
            if (!probe(x, y, from_atom_values(sigma, tv), events[pick(rng)])) return rep;
        }
    }
    return rep;
}

AxiomReport check_g_ql(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts) {
    AxiomReport rep{.axiom = "G-QL", .tolerance = opts.tol};
    const std::size_t k = sigma.atom_count();
    const Event full = sigma.full();

    // For fixed (g1, g2, A), scans d(tail) = T(g1 1_A + tail) - T(g2 1_A + tail)
    // over a set of tails; a sign change beyond tolerance falsifies (G-QL).
    auto scan = [&](const RandomVariable& g1, const RandomVariable& g2, const Event& A,
                    const std::vector<RandomVariable>& tails) -> bool {
        double dmin = 0.0, dmax = 0.0;
        std::size_t imin = 0, imax = 0;
        for (std::size_t t = 0; t < tails.size(); ++t) {
            const double d = T(splice(g1, A, tails[t])) - T(splice(g2, A, tails[t]));
            ++rep.samples_used;
            if (t == 0 || d < dmin) { dmin = d; imin = t; }
            if (t == 0 || d > dmax) { dmax = d; imax = t; }
        }
        if (dmin < -opts.tol && dmax > opts.tol) {
            rep.verdict = Verdict::Fail;
            rep.witness = json{{"g1", vec_json(g1.values)}, {"g2", vec_json(g2.values)},
                               {"A", event_json(A)},
                               {"tail_leq", vec_json(tails[imin].values)},
                               {"tail_gt", vec_json(tails[imax].values)},
                               {"d_leq", dmin}, {"d_gt", dmax}};
            return false;
        }
        return true;
    };

    if (exhaustive_mode(sigma, opts)) {
        // Only the values of g1, g2 on A and of the tail off A matter, so
        // enumerate exactly those coordinates.
        for (const Event& A : generated_events(sigma)) {
            if (A.empty() || A == full) continue;  // tail-independent cases
            std::vector<std::size_t> in_atoms, off_atoms;
            for (std::size_t i = 0; i < k; ++i)
                (sigma.atoms()[i].subset_of(A) ? in_atoms : off_atoms).push_back(i);
            auto expand = [&](const std::vector<std::size_t>& which,
                              const std::vector<double>& vals) {
                std::vector<double> full_vals(k, 0.0);
                for (std::size_t j = 0; j < which.size(); ++j) full_vals[which[j]] = vals[j];
                return from_atom_values(sigma, full_vals);
            };
            std::vector<RandomVariable> tails;
            for_each_grid(off_atoms.size(), opts.grid, [&](const std::vector<double>& tv) {
                tails.push_back(expand(off_atoms, tv));
            });
            bool ok = true;
            for_each_grid(in_atoms.size(), opts.grid, [&](const std::vector<double>& v1) {
                if (!ok) return;
                const RandomVariable g1 = expand(in_atoms, v1);
                for_each_grid(in_atoms.size(), opts.grid, [&](const std::vector<double>& v2) {
                    if (!ok || v2 <= v1) return;
                    ok = scan(g1, expand(in_atoms, v2), A, tails);
                });
            });
            if (!ok) return rep;
        }
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> val(-opts.value_bound, opts.value_bound);
        const std::vector<Event> events = generated_events(sigma);
        std::uniform_int_distribution<std::size_t> pick(0, events.size() - 1);
        const std::size_t groups = std::max<std::size_t>(1, opts.n_samples / 8);
        for (std::size_t s = 0; s < groups; ++s) {
            Event A = events[pick(rng)];
            if (A.empty() || A == full) continue;
            std::vector<double> v1(k), v2(k);
            for (std::size_t i = 0; i < k; ++i) { v1[i] = val(rng); v2[i] = val(rng); }
            std::vector<RandomVariable> tails;
            for (int t = 0; t < 8; ++t) {
                std::vector<double> tv(k);
                for (double& v : tv) v = val(rng);
                tails.push_back(from_atom_values(sigma, tv));
            }
            if (!scan(from_atom_values(sigma, v1), from_atom_values(sigma, v2), A, tails))
                return rep;
        }
    }
    return rep;
}

AxiomReport check_g_pc(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts) {
    AxiomReport rep{.axiom = "G-PC", .tolerance = opts.tol};
    rep.note = "finite Omega: pointwise convergence of norm-bounded sequences "
               "reduces to continuity along paths";
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> val(-opts.value_bound, opts.value_bound);
    const std::size_t k = sigma.atom_count();

    const double fit_ts[] = {0.5, -0.5, 0.25, -0.25, 0.125, -0.125};
    const double test_ts[] = {1e-3, -1e-3, 1e-4, -1e-4, 1e-5, -1e-5, 1e-6, -1e-6};

    for (int path = 0; path < 10; ++path) {
        RandomVariable g, h;
        if (path == 0) {  // fixed path through the origin
            g = RandomVariable::zero(T.size());
            h = RandomVariable::constant(T.size(), 1.0);
        } else {
            std::vector<double> gv(k), hv(k);
            for (std::size_t i = 0; i < k; ++i) { gv[i] = val(rng); hv[i] = val(rng); }
            g = from_atom_values(sigma, gv);
            h = from_atom_values(sigma, hv);
        }
        const double base = T(g);
        double L = 0.0;
        auto at = [&](double t) {
            RandomVariable gt = g;
            for (std::size_t i = 0; i < gt.size(); ++i) gt[i] += t * h[i];
            return T(gt);
        };
        for (double t : fit_ts) L = std::max(L, std::abs(at(t) - base) / std::abs(t));
        for (double t : test_ts) {
            const double delta = std::abs(at(t) - base);
            ++rep.samples_used;
            if (delta > 4.0 * L * std::abs(t) + opts.tol) {
                rep.verdict = Verdict::Fail;
                rep.witness = json{{"g", vec_json(g.values)}, {"h", vec_json(h.values)},
                                   {"t", t}, {"delta", delta}, {"fitted_L", L}};
                return rep;
            }
        }
    }
    return rep;
}

AxiomReport check_g_ps(const Functional& T, const SigmaAlgebra& sigma,
                       const RandomVariable& f, const CheckOptions& opts) {
    AxiomReport rep{.axiom = "G-PS", .tolerance = opts.tol};
    const double bound = f.sup_norm() + 1.0;
    const std::vector<Event> events = generated_events(sigma);
    BisectionConfig cfg;

    auto atom_solve = [&](const Event& A) -> double {
        const ScalarSection sec = scalar_section(T, A);
        return bisect_scalar(sec, T(restrict(f, A)), -bound, bound, cfg).x;
    };

    for (const Event& A1 : events) {
        if (A1.empty()) continue;
        for (const Event& A2 : events) {
            if (A2.empty() || !A1.disjoint(A2)) continue;
            double x1, x2;
            try {
                x1 = atom_solve(A1);
                x2 = atom_solve(A2);
            } catch (const Error& e) {
                rep.verdict = Verdict::Vacuous;
                rep.note = std::string("section solve failed, axiom inapplicable: ") + e.what();
                rep.witness = json{{"A1", event_json(A1)}, {"A2", event_json(A2)}};
                return rep;
            }
            RandomVariable pasted = RandomVariable::zero(T.size());
            for (std::size_t i = 0; i < pasted.size(); ++i) {
                if (A1.contains(i)) pasted[i] = x1;
                if (A2.contains(i)) pasted[i] = x2;
            }
            const double lhs = T(restrict(f, A1.unite(A2)));
            const double rhs = T(pasted);
            ++rep.samples_used;
            if (std::abs(lhs - rhs) > opts.tol) {
                rep.verdict = Verdict::Fail;
                rep.witness = json{{"A1", event_json(A1)}, {"A2", event_json(A2)},
                                   {"x1", x1}, {"x2", x2},
                                   {"T_union", lhs}, {"T_pasted", rhs},
                                   {"residual", std::abs(lhs - rhs)}};
                return rep;
            }
        }
    }
    return rep;
}

AxiomReport check_g_nb(const Functional& T, const SigmaAlgebra& sigma,
                       const RandomVariable& f, const CheckOptions& opts) {
    AxiomReport rep{.axiom = "G-NB", .tolerance = opts.tol};
    const double norm = f.sup_norm();
    for (const Event& A : generated_events(sigma)) {
        const double mid = T(restrict(f, A));
        const double lo = T(restrict(RandomVariable::constant(T.size(), -norm), A));
        const double hi = T(restrict(RandomVariable::constant(T.size(), norm), A));
        ++rep.samples_used;
        if (mid < lo - opts.tol || mid > hi + opts.tol) {
            rep.verdict = Verdict::Fail;
            rep.witness = json{{"A", event_json(A)}, {"T_f", mid},
                               {"T_low", lo}, {"T_high", hi}};
            return rep;
        }
    }
    return rep;
}

AxiomReport check_weak_monotone(const Functional& T, const SigmaAlgebra& sigma,
                                const CheckOptions& opts) {
    AxiomReport rep{.axiom = "WeakMonotone", .tolerance = opts.tol};
    const NullEventSet nulls = null_events(T, sigma, {}, opts.tol_null, opts.value_bound);
    const std::size_t k = sigma.atom_count();

    auto probe = [&](const std::vector<double>& v1, const std::vector<double>& v2) -> bool {
        std::uint64_t strict_mask = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (v1[i] > v2[i]) return true;  // not a pointwise-ordered pair
            if (v1[i] < v2[i]) strict_mask |= sigma.atoms()[i].mask;
        }
        const double t1 = T(from_atom_values(sigma, v1));
        const double t2 = T(from_atom_values(sigma, v2));
        ++rep.samples_used;
        const bool strict_required = (strict_mask & ~nulls.null_mask) != 0;
        const bool bad = strict_required ? (t2 - t1 <= opts.tol_strict)
                                         : (t1 > t2 + opts.tol);
        if (bad) {
            rep.verdict = Verdict::Fail;
            rep.witness = json{{"g1", vec_json(v1)}, {"g2", vec_json(v2)},
                               {"T_g1", t1}, {"T_g2", t2},
                               {"strict_required", strict_required}};
            return false;
        }
        return true;
    };

    if (exhaustive_mode(sigma, opts)) {
        bool ok = true;
        for_each_grid(k, opts.grid, [&](const std::vector<double>& v1) {
            if (!ok) return;
            for_each_grid(k, opts.grid, [&](const std::vector<double>& v2) {
                if (!ok) return;
                ok = probe(v1, v2);
            });
        });
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> val(-opts.value_bound, opts.value_bound);
        std::uniform_real_distribution<double> inc(0.0, 1.0);
        std::bernoulli_distribution keep(0.5);
        for (std::size_t s = 0; s < opts.n_samples; ++s) {
            std::vector<double> v1(k), v2(k);
            for (std::size_t i = 0; i < k; ++i) {
                v1[i] = val(rng);
                v2[i] = keep(rng) ? v1[i] : v1[i] + 0.1 + inc(rng);
            }
            if (!probe(v1, v2)) break;
        }
    }
    return rep;
}

AxiomReport check_null_closure(const NullEventSet& null_set, const Functional& T,
                               const SigmaAlgebra& sigma, const CheckOptions& opts) {
    AxiomReport rep{.axiom = "NullClosure", .tolerance = opts.tol_null};
    if (null_set.null_atoms.empty()) {
        rep.verdict = Verdict::Vacuous;
        rep.note = "no null atoms";
        return rep;
    }
    const std::size_t m = null_set.null_atoms.size();
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < m; ++j)
            if ((sub >> j) & 1u) mask |= sigma.atoms()[null_set.null_atoms[j]].mask;
        const Event e{mask, sigma.space_size()};
        const ScalarSection sec = scalar_section(T, e);
        for (double x : null_set.x_grid) {
            ++rep.samples_used;
            if (std::abs(sec(x)) > opts.tol_null) {
                rep.verdict = Verdict::Fail;
                rep.witness = json{{"event", event_json(e)}, {"x", x}, {"T", sec(x)}};
                return rep;
            }
        }
    }
    return rep;
}

std::vector<AxiomReport> check_all(const Functional& T, const SigmaAlgebra& sigma,
                                   const RandomVariable& f, const CheckOptions& opts) {
    std::vector<AxiomReport> out;
    out.push_back(check_g_mo(T, sigma, opts));
    out.push_back(check_g_ql(T, sigma, opts));
    out.push_back(check_g_pc(T, sigma, opts));
    out.push_back(check_g_ps(T, sigma, f, opts));
    out.push_back(check_g_nb(T, sigma, f, opts));
    out.push_back(check_weak_monotone(T, sigma, opts));
    const NullEventSet nulls = null_events(T, sigma, {}, opts.tol_null, opts.value_bound);
    out.push_back(check_null_closure(nulls, T, sigma, opts));
    return out;
}

}  // namespace chisini
