#ifndef CHISINI_REPRESENTATION_HPP
#define CHISINI_REPRESENTATION_HPP

#include <optional>
#include <utility>

#include <json.hpp>

#include "chisini/axioms.hpp"
#include "chisini/solver.hpp"
#include "chisini/space.hpp"

namespace chisini {

/// An additive set function on a sigma-algebra, stored per atom; the value
/// on any generated event is the sum over contained atoms, so additivity
/// is structural.
struct SignedMeasure {
    SigmaAlgebra sigma;
    std::vector<double> atom_values;

    /// Value on an event that is a union of atoms.
    double operator()(const Event& e) const;
    double total() const;
};

nlohmann::ordered_json to_json(const SignedMeasure& m);

enum class PiGEmptyCase { None, TwoNonNullAtoms, OneNonNullAtom, OmegaNull };

struct PiGClassification {
    bool nonempty = false;
    std::optional<SigmaAlgebra> witness_partition;  // >= 3 non-null atoms
    PiGEmptyCase empty_case = PiGEmptyCase::None;
    std::size_t non_null_atoms = 0;
};

std::string pi_g_case_name(const PiGClassification& c);

/// Counts non-null atoms of the finest G-partition (the atom partition
/// itself): >= 3 means the additive representation applies.
PiGClassification classify_pi_g(const Functional& T, const SigmaAlgebra& sigma,
                                double tol_null = 1e-10);

/// The additive representation for Linear / QuasiArithmetic / Entropic:
/// V_A(g) = sum_{w in A} p_w (U(g(w)) - U(0)) / sum_w p_w (U(1) - U(0)),
/// normalized so V_A(0) = 0 and V_Omega(1) = 1 exactly.
/// Requires g G-measurable; throws for Choquet/Tabulated.
SignedMeasure v_measure(const Functional& T, const SigmaAlgebra& sigma,
                        const RandomVariable& g);

/// P(A) = V_A(1): a probability on the atoms vanishing exactly on the
/// null events. Throws on negativity beyond -1e-12 or on a mismatch with
/// the grid-detected null atoms.
SignedMeasure induced_probability(const Functional& T, const SigmaAlgebra& sigma);

/// V_A[f] = V_A(conditional Chisini mean of f). Cross-checked against the
/// refinement-independent route through the discrete partition (where the
/// conditional mean is f itself); a disagreement beyond 1e-10 throws.
SignedMeasure v_bracket(const Functional& T, const RandomVariable& f,
                        const SigmaAlgebra& sigma, const BisectionConfig& cfg = {});

struct SignAgreementReport {
    bool pass = true;
    std::size_t comparisons = 0;
    nlohmann::ordered_json witness;
};

/// sign(T(f 1_A) - T(g 1_A)) must agree with sign(V_A[f] - V_A(g)) for
/// every generated event and sampled G-measurable g.
SignAgreementReport check_order_preservation(const Functional& T, const SigmaAlgebra& sigma,
                                             const RandomVariable& f,
                                             std::size_t g_samples = 20,
                                             std::uint64_t seed = 0, double tol = 1e-9);

struct RefinementReport {
    bool pass = true;
    double max_diff = 0.0;
    std::size_t comparisons = 0;
};

/// Coarse V_A(g) equals the sum of fine V_B(g) over B inside A, for
/// sampled coarse-measurable g.
RefinementReport check_refinement_consistency(const Functional& T,
                                              const SigmaAlgebra& sigma_fine,
                                              const SigmaAlgebra& sigma_coarse,
                                              std::size_t g_samples = 20,
                                              std::uint64_t seed = 0, double tol = 1e-10);

/// Finite-atom Hahn decomposition: the sign split of atom values.
/// Returns (positive_event, negative_event).
std::pair<Event, Event> hahn_decomposition(const SignedMeasure& mu);

/// One upward step of the increase construction: finds epsilon on a dyadic
/// grid and Omega_0 from the Hahn split of A -> V_A[f] - V_A(g + eps) such
/// that g + eps 1_{Omega_0} still satisfies every inequality. Returns the
/// improved g, or nullopt when no strict slack remains or no grid epsilon
/// works. g must satisfy T(f 1_A) >= T(g 1_A) on all events (throws
/// naming the violated event otherwise).
std::optional<RandomVariable> increase_step(const Functional& T, const RandomVariable& f,
                                            const RandomVariable& g,
                                            const SigmaAlgebra& sigma,
                                            std::vector<double> epsilon_grid = {},
                                            double tol = 1e-9);

}  // namespace chisini

#endif
