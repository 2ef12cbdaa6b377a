#include "chisini/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chisini {

namespace {

void validate_weights(const std::vector<double>& w) {
    if (w.empty() || w.size() > kMaxOutcomes)
        throw ValidationError("weight vector length out of range");
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0))
            throw ValidationError("weights must be nonnegative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError("weights must sum to 1");
}

// Inverts a strictly increasing scalar function by bracket expansion plus
// bisection, tolerance 1e-12 on the argument.
double invert_increasing(const std::function<double(double)>& U, double y) {
    double lo = -1.0, hi = 1.0;
    int expansions = 0;
    while (U(lo) > y && expansions < 80) { lo *= 2.0; ++expansions; }
    while (U(hi) < y && expansions < 160) { hi *= 2.0; ++expansions; }
    if (U(lo) > y || U(hi) < y)
        throw Error("utility inversion: bracket expansion failed");
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (U(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Linear: return "linear";
        case Family::QuasiArithmetic: return "quasi_arithmetic";
        case Family::Entropic: return "entropic";
        case Family::Choquet: return "choquet";
        case Family::Tabulated: return "tabulated";
    }
    return "?";
}

double log_sum_exp(const std::vector<double>& a, const std::vector<double>& w) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (w[i] > 0.0) m = std::max(m, a[i]);
    if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (w[i] > 0.0) s += w[i] * std::exp(a[i] - m);
    return m + std::log(s);
}

Functional Functional::linear(std::vector<double> weights) {
    validate_weights(weights);
    Functional T;
    T.family_ = Family::Linear;
    T.n_ = weights.size();
    T.weights_ = std::move(weights);
    return T;
}

Functional Functional::quasi_arithmetic(std::vector<double> weights,
                                        std::function<double(double)> utility,
                                        std::function<double(double)> inverse,
                                        std::string utility_name,
                                        double check_halfwidth) {
    validate_weights(weights);
    if (!utility)
        throw ValidationError("quasi_arithmetic needs a utility");
    const double B = check_halfwidth;
    double prev = utility(-B);
    for (int i = 1; i <= 100; ++i) {
        double x = -B + 2.0 * B * i / 100.0;
        double cur = utility(x);
        if (!(cur > prev))
            throw ValidationError("utility is not strictly increasing on the check grid");
        prev = cur;
    }
    Functional T;
    T.family_ = Family::QuasiArithmetic;
    T.n_ = weights.size();
    T.weights_ = std::move(weights);
    T.utility_ = std::move(utility);
    T.inverse_ = std::move(inverse);
    T.param_name_ = std::move(utility_name);
    T.offset_ = T.utility_(0.0);
    return T;
}

Functional Functional::entropic(std::vector<double> weights, double gamma) {
    validate_weights(weights);
    if (!(gamma > 0.0))
        throw ValidationError("entropic gamma must be positive");
    Functional T;
    T.family_ = Family::Entropic;
    T.n_ = weights.size();
    T.weights_ = std::move(weights);
    T.gamma_ = gamma;
    return T;
}

Functional Functional::choquet(std::vector<double> weights,
                               std::function<double(double)> distortion,
                               std::string distortion_name) {
    validate_weights(weights);
    if (!distortion)
        throw ValidationError("choquet needs a distortion");
    Functional T;
    T.family_ = Family::Choquet;
    T.n_ = weights.size();
    T.weights_ = std::move(weights);
    T.distortion_ = std::move(distortion);
    T.param_name_ = std::move(distortion_name);
    T.offset_ = T.raw_evaluate(RandomVariable::zero(T.n_));
    return T;
}

Functional Functional::tabulated(std::size_t n,
                                 std::function<double(const RandomVariable&)> eval) {
    if (n == 0 || n > kMaxOutcomes)
        throw ValidationError("tabulated size out of range");
    if (!eval)
        throw ValidationError("tabulated needs an evaluation callback");
    Functional T;
    T.family_ = Family::Tabulated;
    T.n_ = n;
    T.callback_ = std::move(eval);
    const RandomVariable z = RandomVariable::zero(n);
    const double v1 = T.callback_(z), v2 = T.callback_(z);
    if (v1 != v2)
        throw ValidationError("tabulated callback is not deterministic");
    T.offset_ = v1;
    return T;
}

const std::vector<double>& Functional::weights() const {
    if (family_ == Family::Tabulated)
        throw Error("tabulated functional carries no weights");
    return weights_;
}

double Functional::raw_evaluate(const RandomVariable& f) const {
    switch (family_) {
        case Family::Linear: {
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * f[i];
            return s;
        }
        case Family::QuasiArithmetic: {
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * utility_(f[i]);
            return s;
        }
        case Family::Entropic: {
            std::vector<double> a(n_);
            for (std::size_t i = 0; i < n_; ++i) a[i] = gamma_ * f[i];
            return log_sum_exp(a, weights_) / gamma_;
        }
        case Family::Choquet: {
            // Sort-and-telescope: outcomes in decreasing value order,
            // increments of the distorted tail probability.
            std::vector<std::size_t> order(n_);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
            double tail = 0.0, wprev = distortion_(0.0), s = 0.0;
            for (std::size_t i : order) {
                tail += weights_[i];
                double wcur = distortion_(std::min(tail, 1.0));
                s += f[i] * (wcur - wprev);
                wprev = wcur;
            }
            return s;
        }
        case Family::Tabulated:
            return callback_(f);
    }
    throw Error("unreachable");
}

double Functional::operator()(const RandomVariable& f) const {
    if (f.size() != n_)
        throw Error("evaluate: size mismatch");
    double v = raw_evaluate(f) - offset_;
    if (std::isnan(v))
        throw Error("evaluate produced NaN");
    return v;
}

double Functional::utility(double x) const {
    switch (family_) {
        case Family::Linear: return x;
        case Family::QuasiArithmetic: return utility_(x);
        case Family::Entropic: return std::exp(gamma_ * x);
        default: throw Error("no utility for this family");
    }
}

double Functional::utility_inverse(double y) const {
    switch (family_) {
        case Family::Linear: return y;
        case Family::QuasiArithmetic:
            if (inverse_) return inverse_(y);
            return invert_increasing(utility_, y);
        case Family::Entropic: return std::log(y) / gamma_;
        default: throw Error("no utility for this family");
    }
}

std::optional<RandomVariable> Functional::closed_form_conditional(
    const RandomVariable& f, const SigmaAlgebra& sigma) const {
    if (!representable()) return std::nullopt;
    if (f.size() != n_ || sigma.space_size() != n_)
        throw Error("closed_form_conditional: size mismatch");
    RandomVariable g = RandomVariable::zero(n_);
    for (const Event& atom : sigma.atoms()) {
        double pa = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            if (atom.contains(i)) pa += weights_[i];
        double value = 0.0;  // null-atom convention
        if (pa > 0.0) {
            if (family_ == Family::Entropic) {
                // (1/gamma) log E[exp(gamma f) | atom], via shifted LSE.
                std::vector<double> a(n_), w(n_, 0.0);
                for (std::size_t i = 0; i < n_; ++i) {
                    a[i] = gamma_ * f[i];
                    if (atom.contains(i)) w[i] = weights_[i] / pa;
                }
                value = log_sum_exp(a, w) / gamma_;
            } else {
                double s = 0.0;
                for (std::size_t i = 0; i < n_; ++i)
                    if (atom.contains(i)) s += weights_[i] * utility(f[i]);
                value = utility_inverse(s / pa);
            }
        }
        for (std::size_t i = 0; i < n_; ++i)
            if (atom.contains(i)) g[i] = value;
    }
    return g;
}

double ScalarSection::operator()(double x) const {
    RandomVariable v = RandomVariable::zero(A_.space_size);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (A_.contains(i)) v[i] = x;
    return T_(v);
}

ScalarSection scalar_section(const Functional& T, const Event& A) {
    if (T.size() != A.space_size)
        throw Error("scalar_section: size mismatch");
    return ScalarSection(T, A);
}

}  // namespace chisini
