#ifndef CHISINI_AXIOMS_HPP
#define CHISINI_AXIOMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "chisini/functional.hpp"
#include "chisini/numeric.hpp"
#include "chisini/space.hpp"

namespace chisini {

enum class Verdict { Pass, Fail, Vacuous };

std::string verdict_name(Verdict v);

/// A sampled check can only falsify a universally quantified axiom;
/// verdict Pass means "no violation found".
struct AxiomReport {
    std::string axiom;
    Verdict verdict = Verdict::Pass;
    nlohmann::ordered_json witness;  // null unless verdict == Fail
    std::size_t samples_used = 0;
    double tolerance = 0.0;
    std::string note;
};

nlohmann::ordered_json to_json(const AxiomReport& r);

struct CheckOptions {
    double tol = 1e-9;         // inequality slack
    double tol_strict = 1e-12; // strictness margin
    double tol_null = 1e-10;   // null-event detection
    std::uint64_t seed = 0;
    std::size_t n_samples = 500;
    double value_bound = 5.0;  // sampled values live in [-value_bound, value_bound]
    // Instances at or below these sizes are checked exhaustively on `grid`.
    std::size_t exhaustive_max_outcomes = 4;
    std::vector<double> grid = {-2.0, -1.0, 0.0, 1.0, 2.0};
};

struct NullEventSet {
    SigmaAlgebra sigma;
    std::vector<std::size_t> null_atoms;
    std::vector<double> x_grid;
    std::uint64_t null_mask = 0;

    /// A G-measurable event is null iff it is a union of null atoms.
    bool is_null(const Event& e) const { return (e.mask & ~null_mask) == 0; }
};

/// Atom A is marked null iff |T(x * 1_A)| <= tol_null for every grid x.
/// An empty grid selects the default {+-1, +-0.5, +-context_norm}.
NullEventSet null_events(const Functional& T, const SigmaAlgebra& sigma,
                         std::vector<double> x_grid = {}, double tol_null = 1e-10,
                         double context_norm = 1.0);

AxiomReport check_g_mo(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts = {});
AxiomReport check_g_ql(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts = {});
AxiomReport check_g_pc(const Functional& T, const SigmaAlgebra& sigma,
                       const CheckOptions& opts = {});
AxiomReport check_g_ps(const Functional& T, const SigmaAlgebra& sigma,
                       const RandomVariable& f, const CheckOptions& opts = {});
AxiomReport check_g_nb(const Functional& T, const SigmaAlgebra& sigma,
                       const RandomVariable& f, const CheckOptions& opts = {});
AxiomReport check_weak_monotone(const Functional& T, const SigmaAlgebra& sigma,
                                const CheckOptions& opts = {});
AxiomReport check_null_closure(const NullEventSet& null_set, const Functional& T,
                               const SigmaAlgebra& sigma, const CheckOptions& opts = {});

/// Full suite in a fixed order, suitable for the CLI table.
std::vector<AxiomReport> check_all(const Functional& T, const SigmaAlgebra& sigma,
                                   const RandomVariable& f, const CheckOptions& opts = {});

}  // namespace chisini

#endif
