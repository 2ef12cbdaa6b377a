#include "chisini/numeric.hpp"

#include <cmath>
#include <string>

namespace chisini {

BisectResult bisect_scalar(const ScalarSection& section, double target,
                           double lo, double hi, const BisectionConfig& cfg) {
    if (!(cfg.tol_x > 0.0) || !(cfg.tol_f > 0.0) || cfg.max_iter < 1)
        throw ValidationError("bisection config out of range");
    if (lo > hi) std::swap(lo, hi);

    double flo = section(lo), fhi = section(hi);
    if (flo > fhi + cfg.tol_f)
        throw Error("bisect_scalar: section is decreasing on the bracket");

    // Flat over the span: the event is null-equivalent; 0 is the convention.
    if (fhi - flo <= cfg.tol_f) {
        if (std::abs(flo - target) > cfg.tol_f)
            throw Error("bisect_scalar: flat section cannot reach target");
        return {0.0, true, 0};
    }

    int expansions = 0;
    while (flo > target + cfg.tol_f && expansions < cfg.max_expansions) {
        double width = std::max(hi - lo, 1.0);
        lo -= width * (cfg.bracket_expansion - 1.0);
        flo = section(lo);
        ++expansions;
    }
    while (fhi < target - cfg.tol_f && expansions < cfg.max_expansions) {
        double width = std::max(hi - lo, 1.0);
        hi += width * (cfg.bracket_expansion - 1.0);
        fhi = section(hi);
        ++expansions;
    }
    if (flo > target + cfg.tol_f || fhi < target - cfg.tol_f)
        throw Error("bisect_scalar: bracket failure, section(" + std::to_string(lo) +
                    ")=" + std::to_string(flo) + ", section(" + std::to_string(hi) +
                    ")=" + std::to_string(fhi) + ", target=" + std::to_string(target));

    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        double fmid = section(mid);
        // Converge on the bracket, not the function value: a nearly flat
        // section hits |f - target| <= tol_f while x is still far off.
        if (hi - lo <= cfg.tol_x) return {mid, false, it + 1};
        (fmid < target ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false, it};
}

}  // namespace chisini
