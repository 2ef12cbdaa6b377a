#ifndef CHISINI_SPACE_HPP
#define CHISINI_SPACE_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chisini {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

/// Outcomes are indexed 0..n-1; events are bitmasks over those indices.
/// Hard cap: 64 outcomes, so an event fits in one word.
inline constexpr std::size_t kMaxOutcomes = 64;

/// Event-enumeration cap: verification ranges over all 2^k unions of k atoms.
inline constexpr std::size_t kDefaultEventCap = 24;

class FiniteSpace {
public:
    FiniteSpace(std::vector<std::string> outcomes,
                std::optional<std::vector<double>> base_weights = std::nullopt);

    std::size_t size() const { return outcomes_.size(); }
    const std::vector<std::string>& outcomes() const { return outcomes_; }
    bool has_weights() const { return weights_.has_value(); }
    const std::vector<double>& weights() const;

private:
    std::vector<std::string> outcomes_;
    std::optional<std::vector<double>> weights_;
};

struct Event {
    std::uint64_t mask = 0;
    std::size_t space_size = 0;

    Event() = default;
    Event(std::uint64_t m, std::size_t n);

    static Event none(std::size_t n) { return Event{0, n}; }
    static Event all(std::size_t n);
    static Event single(std::size_t i, std::size_t n);

    bool contains(std::size_t i) const { return (mask >> i) & 1u; }
    std::size_t count() const { return static_cast<std::size_t>(std::popcount(mask)); }
    bool empty() const { return mask == 0; }
    /// Lowest outcome index in the event; undefined on the empty event.
    std::size_t lowest() const { return static_cast<std::size_t>(std::countr_zero(mask)); }
    std::uint64_t full_mask() const;

    Event complement() const { return Event{full_mask() & ~mask, space_size}; }
    Event unite(const Event& o) const;
    Event intersect(const Event& o) const;
    bool subset_of(const Event& o) const { return (mask & ~o.mask) == 0; }
    bool disjoint(const Event& o) const { return (mask & o.mask) == 0; }

    friend bool operator==(const Event&, const Event&) = default;
};

struct RandomVariable {
    std::vector<double> values;

    RandomVariable() = default;
    explicit RandomVariable(std::vector<double> v);

    static RandomVariable zero(std::size_t n) { return constant(n, 0.0); }
    static RandomVariable constant(std::size_t n, double c);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double sup_norm() const;
};

/// A sigma-algebra on a finite space, stored as its atom partition.
/// Canonical form: atoms sorted by their lowest outcome index, so equality
/// of sigma-algebras is structural equality.
class SigmaAlgebra {
public:
    SigmaAlgebra() = default;  // empty; only useful as a placeholder

    static SigmaAlgebra from_atoms(std::vector<Event> atoms);
    static SigmaAlgebra trivial(std::size_t n);
    static SigmaAlgebra discrete(std::size_t n);

    const std::vector<Event>& atoms() const { return atoms_; }
    std::size_t atom_count() const { return atoms_.size(); }
    std::size_t space_size() const { return space_size_; }
    Event full() const { return Event::all(space_size_); }

    /// Index of the atom containing outcome i.
    std::size_t atom_of(std::size_t i) const;

    /// True if every atom of *this is contained in some atom of `coarser`.
    bool refines(const SigmaAlgebra& coarser) const;

    friend bool operator==(const SigmaAlgebra&, const SigmaAlgebra&) = default;

private:
    std::vector<Event> atoms_;
    std::size_t space_size_ = 0;
};

SigmaAlgebra partition_from_labels(const FiniteSpace& space,
                                   const std::vector<std::string>& atom_label_per_outcome);

/// All 2^k unions of the k atoms, including the empty event and the full
/// space, in increasing order of the atom-subset index.
std::vector<Event> generated_events(const SigmaAlgebra& sigma,
                                    std::size_t cap = kDefaultEventCap);

SigmaAlgebra common_refinement(const SigmaAlgebra& p1, const SigmaAlgebra& p2);

bool is_measurable(const RandomVariable& f, const SigmaAlgebra& sigma);

/// f * 1_A: values zeroed off A.
RandomVariable restrict(const RandomVariable& f, const Event& A);

/// Atom-wise piecewise-constant projection (each atom gets the value at its
/// lowest outcome). Equals f iff f is measurable.
RandomVariable atomwise_representative(const RandomVariable& f, const SigmaAlgebra& sigma);

}  // namespace chisini

#endif
