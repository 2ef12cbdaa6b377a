#ifndef CHISINI_SOLVER_HPP
#define CHISINI_SOLVER_HPP

#include <map>
#include <optional>

#include <json.hpp>

#include "chisini/axioms.hpp"
#include "chisini/functional.hpp"
#include "chisini/numeric.hpp"
#include "chisini/space.hpp"

namespace chisini {

/// Residuals |T(f 1_A) - T(g 1_A)| over generated events, keyed by event mask.
struct ResidualReport {
    std::map<std::uint64_t, double> per_event;
    double max_residual = 0.0;
    std::uint64_t worst_event = 0;
    bool sampled = false;  // atom count beyond the cap: atoms + pairs + random unions
};

struct ConditionalMeanResult {
    RandomVariable g;                     // the conditional mean, constant per atom
    std::vector<double> atom_values;
    std::vector<std::size_t> null_atoms;  // atoms carrying the 0 convention value
    double max_residual = 0.0;
    ResidualReport residuals;
    std::vector<int> iterations_per_atom;
    std::vector<std::string> warnings;  // e.g. flat-section vs null-event grid mismatch
};

/// The scalar mean m solving T(f) = T(m 1_Omega).
double chisini_mean(const Functional& T, const RandomVariable& f,
                    const BisectionConfig& cfg = {});

ResidualReport verify_system(const Functional& T, const RandomVariable& f,
                             const RandomVariable& g, const SigmaAlgebra& sigma,
                             std::size_t cap = kDefaultEventCap,
                             std::uint64_t seed = 0);

/// Per-atom solve of T(x_A 1_A) = T(f 1_A) with bracket [-|f|, |f|], null
/// atoms assigned 0, followed by mandatory full-system verification.
/// Throws "pasting violated" when all atoms solve but some union event
/// keeps a residual above tol_solve (diagnoses a (G-PS)/(G-QL) failure).
ConditionalMeanResult conditional_chisini(const Functional& T, const RandomVariable& f,
                                          const SigmaAlgebra& sigma,
                                          const BisectionConfig& cfg = {},
                                          double tol_solve = 1e-8);

struct UniquenessVerdict {
    bool pass = false;
    std::optional<std::size_t> offending_atom;
};

/// Both g1, g2 must already verify at tol_solve; the difference event
/// {|g1 - g2| > tol_eq} must be a union of null atoms.
UniquenessVerdict uniqueness_check(const Functional& T, const RandomVariable& g1,
                                   const RandomVariable& g2, const SigmaAlgebra& sigma,
                                   const NullEventSet& null_set, double tol_eq = 1e-7);

struct TowerLocalityReport {
    bool tower_pass = false;
    double tower_max_diff = 0.0;
    bool locality_pass = false;
    double locality_max_diff = 0.0;
    bool monotone_pass = false;
};

/// Tower property through a coarsening, locality under indicators, and
/// monotonicity of atom values under pointwise ordering of inputs.
TowerLocalityReport tower_and_locality_checks(const Functional& T, const RandomVariable& f,
                                              const SigmaAlgebra& sigma_fine,
                                              const SigmaAlgebra& sigma_coarse,
                                              double tol_eq = 1e-7);

nlohmann::ordered_json to_json(const ConditionalMeanResult& r);

}  // namespace chisini

#endif
