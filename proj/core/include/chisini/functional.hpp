#ifndef CHISINI_FUNCTIONAL_HPP
#define CHISINI_FUNCTIONAL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chisini/space.hpp"

namespace chisini {

enum class Family { Linear, QuasiArithmetic, Entropic, Choquet, Tabulated };

std::string family_name(Family f);

/// A functional T : L^inf(Omega, F) -> R, normalized so T(0) = 0 (the
/// at-zero value is subtracted at construction).
class Functional {
public:
    /// T(f) = sum_w p_w f(w).
    static Functional linear(std::vector<double> weights);

    /// T(f) = sum_w p_w U(f(w)) - U(0) for a strictly increasing continuous
    /// utility U. If no inverse is supplied, U^{-1} is computed by bisection.
    /// Monotonicity of U is spot-checked on a 101-point grid over
    /// [-check_halfwidth, check_halfwidth].
    static Functional quasi_arithmetic(std::vector<double> weights,
                                       std::function<double(double)> utility,
                                       std::function<double(double)> inverse = {},
                                       std::string utility_name = "user",
                                       double check_halfwidth = 10.0);

    /// T(f) = (1/gamma) log sum_w p_w exp(gamma f(w)), gamma > 0.
    static Functional entropic(std::vector<double> weights, double gamma);

    /// Choquet integral of f under the distorted set function w(P(.)),
    /// offset by its value at 0. Generally violates (G-QL); kept in the
    /// catalog as the axiom checkers' failure fixture.
    static Functional choquet(std::vector<double> weights,
                              std::function<double(double)> distortion,
                              std::string distortion_name = "user");

    /// Arbitrary user evaluation. Must be pure; a determinism spot-check
    /// (two evaluations compared) runs at construction.
    static Functional tabulated(std::size_t n,
                                std::function<double(const RandomVariable&)> eval);

    Family family() const { return family_; }
    std::size_t size() const { return n_; }
    const std::vector<double>& weights() const;
    double gamma() const { return gamma_; }
    const std::string& param_name() const { return param_name_; }

    /// Evaluate T(f); evaluate(0) = 0 to within 1e-12.
    double operator()(const RandomVariable& f) const;

    bool representable() const {
        return family_ == Family::Linear || family_ == Family::QuasiArithmetic ||
               family_ == Family::Entropic;
    }

    /// The utility carried by the family, viewed as a quasi-arithmetic
    /// form: identity for Linear, U for QuasiArithmetic, exp(gamma .) for
    /// Entropic. Throws for Choquet/Tabulated.
    double utility(double x) const;
    double utility_inverse(double y) const;

    /// U^{-1} E[U(f) | G] atom-wise for the representable families; null
    /// atoms (zero weight) get value 0. nullopt for Choquet/Tabulated.
    std::optional<RandomVariable> closed_form_conditional(const RandomVariable& f,
                                                          const SigmaAlgebra& sigma) const;

private:
    Functional() = default;

    Family family_ = Family::Linear;
    std::size_t n_ = 0;
    std::vector<double> weights_;
    double gamma_ = 0.0;
    std::function<double(double)> utility_;
    std::function<double(double)> inverse_;
    std::function<double(double)> distortion_;
    std::function<double(const RandomVariable&)> callback_;
    double offset_ = 0.0;
    std::string param_name_;

    double raw_evaluate(const RandomVariable& f) const;
};

/// The scalar section x -> T(x * 1_A).
class ScalarSection {
public:
    ScalarSection(Functional T, Event A) : T_(std::move(T)), A_(A) {}

    double operator()(double x) const;
    const Event& event() const { return A_; }
    const Functional& functional() const { return T_; }

private:
    Functional T_;
    Event A_;
};

ScalarSection scalar_section(const Functional& T, const Event& A);

/// Shifted log-sum-exp: log(sum_i w_i exp(a_i)) without overflow. Entries
/// with w_i == 0 are skipped; returns -inf if all weights vanish.
double log_sum_exp(const std::vector<double>& a, const std::vector<double>& w);

}  // namespace chisini

#endif
