#include "chisini/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace chisini {

FiniteSpace::FiniteSpace(std::vector<std::string> outcomes,
                         std::optional<std::vector<double>> base_weights)
    : outcomes_(std::move(outcomes)), weights_(std::move(base_weights)) {
    if (outcomes_.empty())
        throw ValidationError("space needs at least one outcome");
    if (outcomes_.size() > kMaxOutcomes)
        throw ValidationError("space exceeds the 64-outcome cap");
    std::set<std::string> seen(outcomes_.begin(), outcomes_.end());
    if (seen.size() != outcomes_.size())
        throw ValidationError("outcome labels must be unique");
    if (weights_) {
        if (weights_->size() != outcomes_.size())
            throw ValidationError("weight vector length does not match outcome count");
        double sum = 0.0;
        for (double w : *weights_) {
            if (!(w >= 0.0))
                throw ValidationError("weights must be nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("weights must sum to 1");
    }
}

const std::vector<double>& FiniteSpace::weights() const {
    if (!weights_)
        throw Error("space has no base weights");
    return *weights_;
}

Event::Event(std::uint64_t m, std::size_t n) : mask(m), space_size(n) {
    if (n == 0 || n > kMaxOutcomes)
        throw ValidationError("event space size out of range");
    if ((m & ~full_mask()) != 0)
        throw ValidationError("event mask uses bits beyond the space size");
}

std::uint64_t Event::full_mask() const {
    return space_size == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << space_size) - 1);
}

Event Event::all(std::size_t n) {
    Event e{0, n};
    e.mask = e.full_mask();
    return e;
}

Event Event::single(std::size_t i, std::size_t n) {
    if (i >= n)
        throw ValidationError("outcome index out of range");
    return Event{std::uint64_t{1} << i, n};
}

Event Event::unite(const Event& o) const {
    if (space_size != o.space_size)
        throw Error("event space mismatch");
    return Event{mask | o.mask, space_size};
}

Event Event::intersect(const Event& o) const {
    if (space_size != o.space_size)
        throw Error("event space mismatch");
    return Event{mask & o.mask, space_size};
}

RandomVariable::RandomVariable(std::vector<double> v) : values(std::move(v)) {
    for (double x : values)
        if (!std::isfinite(x))
            throw ValidationError("random variable values must be finite");
}

RandomVariable RandomVariable::constant(std::size_t n, double c) {
    return RandomVariable(std::vector<double>(n, c));
}

double RandomVariable::sup_norm() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

SigmaAlgebra SigmaAlgebra::from_atoms(std::vector<Event> atoms) {
    if (atoms.empty())
        throw ValidationError("sigma-algebra needs at least one atom");
    const std::size_t n = atoms.front().space_size;
    std::uint64_t seen = 0;
    for (const Event& a : atoms) {
        if (a.space_size != n)
            throw ValidationError("atoms on different spaces");
        if (a.empty())
            throw ValidationError("atoms must be nonempty");
        if (seen & a.mask)
            throw ValidationError("atoms must be pairwise disjoint");
        seen |= a.mask;
    }
    if (seen != Event::all(n).mask)
        throw ValidationError("atoms must cover the whole space");
    std::sort(atoms.begin(), atoms.end(), [](const Event& a, const Event& b) {
        return std::countr_zero(a.mask) < std::countr_zero(b.mask);
    });
    SigmaAlgebra s;
    s.atoms_ = std::move(atoms);
    s.space_size_ = n;
    return s;
}

SigmaAlgebra SigmaAlgebra::trivial(std::size_t n) {
    return from_atoms({Event::all(n)});
}

SigmaAlgebra SigmaAlgebra::discrete(std::size_t n) {
    std::vector<Event> atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(Event::single(i, n));
    return from_atoms(std::move(atoms));
}

std::size_t SigmaAlgebra::atom_of(std::size_t i) const {
    for (std::size_t k = 0; k < atoms_.size(); ++k)
        if (atoms_[k].contains(i)) return k;
    throw Error("outcome index out of range");
}

bool SigmaAlgebra::refines(const SigmaAlgebra& coarser) const {
    if (space_size_ != coarser.space_size_) return false;
    for (const Event& a : atoms_) {
        bool inside = false;
        for (const Event& c : coarser.atoms_)
            if (a.subset_of(c)) { inside = true; break; }
        if (!inside) return false;
    }
    return true;
}

SigmaAlgebra partition_from_labels(const FiniteSpace& space,
                                   const std::vector<std::string>& labels) {
    if (labels.size() != space.size())
        throw ValidationError("need exactly one atom label per outcome");
    std::map<std::string, std::uint64_t> fibers;
    for (std::size_t i = 0; i < labels.size(); ++i)
        fibers[labels[i]] |= std::uint64_t{1} << i;
    std::vector<Event> atoms;
    for (const auto& [label, mask] : fibers)
        atoms.emplace_back(mask, space.size());
    return SigmaAlgebra::from_atoms(std::move(atoms));
}

std::vector<Event> generated_events(const SigmaAlgebra& sigma, std::size_t cap) {
    const std::size_t k = sigma.atom_count();
    if (k > cap)
        throw Error("generated_events: atom count " + std::to_string(k) +
                    " exceeds the enumeration cap " + std::to_string(cap));
    std::vector<Event> events;
    events.reserve(std::size_t{1} << k);
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < k; ++j)
            if ((sub >> j) & 1u) mask |= sigma.atoms()[j].mask;
        events.emplace_back(mask, sigma.space_size());
    }
    return events;
}

SigmaAlgebra common_refinement(const SigmaAlgebra& p1, const SigmaAlgebra& p2) {
    if (p1.space_size() != p2.space_size())
        throw Error("common_refinement: space mismatch");
    std::vector<Event> atoms;
    for (const Event& a : p1.atoms())
        for (const Event& b : p2.atoms()) {
            Event c = a.intersect(b);
            if (!c.empty()) atoms.push_back(c);
        }
    return SigmaAlgebra::from_atoms(std::move(atoms));
}

bool is_measurable(const RandomVariable& f, const SigmaAlgebra& sigma) {
    if (f.size() != sigma.space_size())
        throw Error("is_measurable: size mismatch");
    for (const Event& a : sigma.atoms()) {
        double ref = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!a.contains(i)) continue;
            if (first) { ref = f[i]; first = false; }
            else if (f[i] != ref) return false;
        }
    }
    return true;
}

RandomVariable restrict(const RandomVariable& f, const Event& A) {
    if (f.size() != A.space_size)
        throw Error("restrict: size mismatch");
    RandomVariable out = f;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!A.contains(i)) out[i] = 0.0;
    return out;
}

RandomVariable atomwise_representative(const RandomVariable& f, const SigmaAlgebra& sigma) {
    if (f.size() != sigma.space_size())
        throw Error("atomwise_representative: size mismatch");
    RandomVariable out = f;
    for (const Event& a : sigma.atoms()) {
        const double v = f[static_cast<std::size_t>(std::countr_zero(a.mask))];
        for (std::size_t i = 0; i < f.size(); ++i)
            if (a.contains(i)) out[i] = v;
    }
    return out;
}

}  // namespace chisini
