#ifndef CHISINI_NUMERIC_HPP
#define CHISINI_NUMERIC_HPP

#include "chisini/functional.hpp"

namespace chisini {

struct BisectionConfig {
    double tol_x = 1e-12;
    double tol_f = 1e-12;
    int max_iter = 200;
    double bracket_expansion = 2.0;
    int max_expansions = 60;
};

struct BisectResult {
    double x = 0.0;
    bool flat = false;  // section indistinguishable from constant on the bracket
    int iterations = 0;
};

/// Solves section(x) = target for a nondecreasing section on [lo, hi] by
/// bisection, expanding the bracket geometrically when the target lies
/// outside. Flat sections (null events) return x = 0 with the flat flag.
/// Throws on bracket failure or a detected non-monotone section.
BisectResult bisect_scalar(const ScalarSection& section, double target,
                           double lo, double hi, const BisectionConfig& cfg = {});

}  // namespace chisini

#endif
