#ifndef CHISINI_RISK_HPP
#define CHISINI_RISK_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "chisini/axioms.hpp"
#include "chisini/solver.hpp"
#include "chisini/space.hpp"

namespace chisini {

enum class RiskFamily { EntropicRM, ConditionalEV, Tabulated };

/// A conditional convex risk measure evaluated atom-wise against a base
/// measure on outcomes. Atoms of measure zero get value 0 by convention,
/// so the normalization rho_G(0) = 0 holds everywhere.
class ConditionalRiskMeasure {
  public:
    /// Callback receives (X, atom, conditional weights on the atom) and
    /// returns the atom value. Weights sum to 1 over the atom.
    using AtomFn = std::function<double(const RandomVariable&, const Event&,
                                        const std::vector<double>&)>;

    static ConditionalRiskMeasure entropic(double gamma);
    static ConditionalRiskMeasure conditional_ev();
    static ConditionalRiskMeasure tabulated(AtomFn fn, std::string label = "tabulated");

    RiskFamily family() const { return family_; }
    double gamma() const { return gamma_; }
    const std::string& label() const { return label_; }

    /// Atom value against conditional weights (already normalized over the
    /// atom). Entropic uses a shifted log-sum-exp.
    double atom_value(const RandomVariable& X, const Event& atom,
                      const std::vector<double>& cond_weights) const;

  private:
    RiskFamily family_;
    double gamma_ = 1.0;
    AtomFn fn_;
    std::string label_;
};

/// rho_G(X) as a G-measurable vector. weights is the base measure on
/// outcomes; atoms with zero total weight get 0.
RandomVariable evaluate_conditional(const ConditionalRiskMeasure& rm,
                                    const RandomVariable& X, const SigmaAlgebra& sigma,
                                    const std::vector<double>& weights);

struct RiskCheckItem {
    std::string name;
    bool pass = true;
    std::size_t samples = 0;
    nlohmann::ordered_json witness;
};

struct RiskAxiomReport {
    std::vector<RiskCheckItem> items;
    bool all_pass() const;
};

nlohmann::ordered_json to_json(const RiskAxiomReport& r);

/// Sampled checks of antitonicity, conditional cash additivity with
/// G-measurable shifts, conditional convexity with G-measurable Lambda in
/// [0,1], and locality rho_G(X 1_A) = rho_G(X) 1_A. Assertions hold
/// atom-wise off null atoms (atoms of measure zero).
RiskAxiomReport check_conditional_axioms(const ConditionalRiskMeasure& rm,
                                         const SigmaAlgebra& sigma,
                                         const std::vector<double>& weights,
                                         std::uint64_t seed = 0,
                                         std::size_t n_samples = 200, double tol = 1e-9);

/// rho0(X) = sum over atoms of P(atom) * rho_G(X) on the atom.
struct ScalarRiskFunctional {
    std::function<double(const RandomVariable&)> eval;
    std::string provenance;  // "scalarized" or "user"
    std::size_t space_size = 0;

    double operator()(const RandomVariable& X) const { return eval(X); }
};

ScalarRiskFunctional scalarize(const ConditionalRiskMeasure& rm, const SigmaAlgebra& sigma,
                               const std::vector<double>& weights);

/// The four scalarization conditions: translation by G-measurable Y
/// (rho0(X+Y) = rho0(X) - E[Y]), antitonicity, pasting of the associated
/// functional f -> rho0(-f), and the convexity inequality over sampled
/// simple Lambda.
RiskAxiomReport check_scalarization_conditions(const ScalarRiskFunctional& rho0,
                                               const SigmaAlgebra& sigma,
                                               const std::vector<double>& weights,
                                               std::uint64_t seed = 0,
                                               std::size_t n_samples = 100,
                                               double tol = 1e-9);

/// Rebuilds a conditional risk measure from its scalarization: for each X,
/// solve the conditional Chisini problem for T(f) := rho0(-f) and negate.
/// Solver results are cached per X; the cache serializes writers and is
/// safe for concurrent readers.
ConditionalRiskMeasure reconstruct_conditional(const ScalarRiskFunctional& rho0,
                                               const SigmaAlgebra& sigma,
                                               const std::vector<double>& weights,
                                               const BisectionConfig& cfg = {});

struct RoundTripReport {
    std::vector<double> residuals;  // per sampled X, sup over non-null atoms
    double max_residual = 0.0;
    bool pass = false;
};

nlohmann::ordered_json to_json(const RoundTripReport& r);

/// reconstruct(scalarize(rm)) vs rm on seeded random X, compared atom-wise
/// off null atoms.
RoundTripReport risk_round_trip(const ConditionalRiskMeasure& rm, const SigmaAlgebra& sigma,
                                const std::vector<double>& weights,
                                std::size_t n_samples = 20, std::uint64_t seed = 0,
                                double tol = 1e-8);

}  // namespace chisini

#endif
