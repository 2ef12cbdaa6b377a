#ifndef TEST_SUPPORT_HPP
#define TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "chisini/space.hpp"

namespace testutil {

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n,
                                          std::size_t zero_atoms = 0) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w(n);
    for (double& x : w) x = u(rng);
    for (std::size_t z = 0; z < zero_atoms && z < n; ++z) w[n - 1 - z] = 0.0;
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    return w;
}

inline chisini::SigmaAlgebra random_partition(std::mt19937_64& rng, std::size_t n,
                                              std::size_t k) {
    std::vector<chisini::Event> atoms(k, chisini::Event::none(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i < k ? i : rng() % k;
        atoms[a] = atoms[a].unite(chisini::Event::single(i, n));
    }
    return chisini::SigmaAlgebra::from_atoms(atoms);
}

inline chisini::RandomVariable random_vector(std::mt19937_64& rng, std::size_t n,
                                             double half = 3.0) {
    std::uniform_real_distribution<double> d(-half, half);
    chisini::RandomVariable f = chisini::RandomVariable::zero(n);
    for (double& x : f.values) x = d(rng);
    return f;
}

/// Independent scalar inversion of an increasing function, for oracle use.
template <typename F>
double invert_by_bisection(F&& fn, double target, double lo = -1e6, double hi = 1e6) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace testutil

#endif
