#include <doctest.h>

#include <cmath>

#include "chisini/representation.hpp"
#include "test_support.hpp"

using namespace chisini;

namespace {
const std::vector<double> kUniform2{0.5, 0.5};
const std::vector<double> kUniform3{1.0 / 3, 1.0 / 3, 1.0 / 3};
const std::vector<double> kUniform4{0.25, 0.25, 0.25, 0.25};
const SigmaAlgebra kPairs = SigmaAlgebra::from_atoms({Event{0b0011, 4}, Event{0b1100, 4}});

Functional exp_qa(std::vector<double> w) {
    return Functional::quasi_arithmetic(std::move(w),
                                        [](double x) { return std::exp(x); },
                                        [](double y) { return std::log(y); }, "exp");
}
}

TEST_CASE("pi(G) classification") {
    CHECK(classify_pi_g(Functional::linear(kUniform4), SigmaAlgebra::discrete(4)).nonempty);

    const auto case_i =
        classify_pi_g(Functional::linear({0.5, 0.5, 0.0, 0.0}), SigmaAlgebra::discrete(4));
    CHECK_FALSE(case_i.nonempty);
    CHECK(case_i.empty_case == PiGEmptyCase::TwoNonNullAtoms);
    CHECK(pi_g_case_name(case_i) == "case_i");

    const auto case_ii =
        classify_pi_g(Functional::linear(kUniform3), SigmaAlgebra::trivial(3));
    CHECK(case_ii.empty_case == PiGEmptyCase::OneNonNullAtom);
    CHECK(pi_g_case_name(case_ii) == "case_ii");

    const Functional zero = Functional::tabulated(2, [](const RandomVariable&) {
        return 0.0;
    });
    const auto omega = classify_pi_g(zero, SigmaAlgebra::discrete(2));
    CHECK(omega.empty_case == PiGEmptyCase::OmegaNull);
    CHECK(pi_g_case_name(omega) == "omega_null");
}

TEST_CASE("v_measure formula and normalization") {
    const SigmaAlgebra disc2 = SigmaAlgebra::discrete(2);
    const SignedMeasure lin =
        v_measure(Functional::linear(kUniform2), disc2, RandomVariable({1, 0}));
    CHECK(lin.atom_values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lin.atom_values[1] == doctest::Approx(0.0));

    const SignedMeasure expm =
        v_measure(exp_qa(kUniform2), disc2, RandomVariable({1, 0}));
    CHECK(expm.atom_values[0] == doctest::Approx(0.5).epsilon(1e-12));

    // V_A(0) = 0 and sum of V(1) atoms = 1, to 1e-12
    for (const Functional& T :
         {Functional::linear(kUniform4), Functional::entropic(kUniform4, 2.0),
          exp_qa(kUniform4)}) {
        const SignedMeasure z = v_measure(T, kPairs, RandomVariable::zero(4));
        for (double v : z.atom_values) CHECK(std::abs(v) <= 1e-12);
        const SignedMeasure one = v_measure(T, kPairs, RandomVariable::constant(4, 1.0));
        CHECK(one.total() == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_WITH_AS(
        v_measure(Functional::choquet(kUniform2, [](double t) { return t * t; }), disc2,
                  RandomVariable::zero(2)),
        doctest::Contains("no closed-form"), Error);
    CHECK_THROWS_AS(v_measure(Functional::linear(kUniform4), kPairs,
                              RandomVariable({1, 2, 3, 4})),
                    Error);
}

TEST_CASE("off-atom values cannot influence V_A") {
    // evaluating V at g and at g * 1_A gives the same atom value
    std::mt19937_64 rng(3);
    const Functional T = Functional::entropic(kUniform4, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> vals{double(rng() % 7) - 3.0, double(rng() % 7) - 3.0};
        RandomVariable g({vals[0], vals[0], vals[1], vals[1]});
        const SignedMeasure full = v_measure(T, kPairs, g);
        const SignedMeasure cut = v_measure(T, kPairs, restrict(g, kPairs.atoms()[0]));
        CHECK(full.atom_values[0] == doctest::Approx(cut.atom_values[0]).epsilon(1e-12));
    }
}

TEST_CASE("signed measure evaluation is additive and guards non-measurable events") {
    const SignedMeasure m{kPairs, {0.25, -0.5}};
    CHECK(m(Event{0b0011, 4}) == 0.25);
    CHECK(m(Event::all(4)) == doctest::Approx(-0.25));
    CHECK(m(Event::none(4)) == 0.0);
    CHECK_THROWS_AS(m(Event{0b0001, 4}), Error);
}

TEST_CASE("induced probability") {
    const SignedMeasure p =
        induced_probability(Functional::linear({0.2, 0.8}), SigmaAlgebra::discrete(2));
    CHECK(p.atom_values[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(p.atom_values[1] == doctest::Approx(0.8).epsilon(1e-12));

    // exp utility: the U(1)-U(0) factors cancel, leaving the base weights
    const SignedMeasure q = induced_probability(exp_qa(kUniform3), SigmaAlgebra::discrete(3));
    for (double v : q.atom_values) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));

    // zero-weight atom: P = 0 there and consistent with the null set
    const SignedMeasure z =
        induced_probability(Functional::linear({0.5, 0.5, 0.0}), SigmaAlgebra::discrete(3));
    CHECK(z.atom_values[2] == 0.0);
}

TEST_CASE("v_bracket matches the direct conditional route") {
    const SignedMeasure vf =
        v_bracket(Functional::linear(kUniform4), RandomVariable({0, 2, 1, 5}), kPairs);
    CHECK(vf.atom_values[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(vf.atom_values[1] == doctest::Approx(1.5).epsilon(1e-9));

    // measurable f: V[f] = V(f)
    const Functional ent = Functional::entropic(kUniform4, 1.0);
    const RandomVariable g({2, 2, -1, -1});
    const SignedMeasure a = v_bracket(ent, g, kPairs);
    const SignedMeasure b = v_measure(ent, kPairs, g);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(a.atom_values[k] == doctest::Approx(b.atom_values[k]).epsilon(1e-9));

    const SignedMeasure zero = v_bracket(ent, RandomVariable::zero(4), kPairs);
    for (double v : zero.atom_values) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("order preservation between T and V") {
    std::mt19937_64 rng(7);
    for (const Functional& T :
         {Functional::linear(kUniform4), Functional::entropic(kUniform4, 1.0),
          exp_qa(kUniform4)}) {
        const RandomVariable f = testutil::random_vector(rng, 4, 2.0);
        const SignAgreementReport rep = check_order_preservation(T, kPairs, f, 20, 5);
        INFO(rep.witness.dump());
        CHECK(rep.pass);
        CHECK(rep.comparisons > 0);
    }
}

TEST_CASE("refinement consistency") {
    const RefinementReport lin = check_refinement_consistency(
        Functional::linear(kUniform4), SigmaAlgebra::discrete(4), kPairs);
    CHECK(lin.pass);

    const RefinementReport expr = check_refinement_consistency(
        exp_qa(kUniform4), kPairs, SigmaAlgebra::trivial(4));
    CHECK(expr.pass);
    CHECK(expr.max_diff <= 1e-10);

    CHECK_THROWS_AS(check_refinement_consistency(Functional::linear(kUniform4), kPairs,
                                                 SigmaAlgebra::discrete(4)),
                    Error);
}

TEST_CASE("hahn decomposition is the sign split") {
    const SigmaAlgebra disc3 = SigmaAlgebra::discrete(3);
    const auto [pos, neg] = hahn_decomposition(SignedMeasure{disc3, {0.2, -0.1, 0.3}});
    CHECK(pos.mask == 0b101);
    CHECK(neg.mask == 0b010);

    CHECK(hahn_decomposition(SignedMeasure{disc3, {0.1, 0.0, 0.3}}).first ==
          Event::all(3));
    CHECK(hahn_decomposition(SignedMeasure{disc3, {-0.1, -0.2, -0.3}}).first ==
          Event::none(3));
}

TEST_CASE("increase_step") {
    const Functional T = Functional::linear(kUniform2);
    const SigmaAlgebra triv = SigmaAlgebra::trivial(2);

    // strictly below: improvement found
    const auto up = increase_step(T, RandomVariable({2, 2}), RandomVariable({0, 0}), triv);
    REQUIRE(up.has_value());
    CHECK((*up)[0] > 0.0);

    // already optimal: no strict slack
    CHECK_FALSE(increase_step(T, RandomVariable({2, 2}), RandomVariable({2, 2}), triv)
                    .has_value());

    // above f somewhere: precondition violation
    CHECK_THROWS_AS(
        increase_step(T, RandomVariable({2, 2}), RandomVariable({3, 3}), triv), Error);

    // deficit concentrated on one atom: the bump lands there
    const Functional T4 = Functional::linear(kUniform4);
    const RandomVariable f({1, 1, 3, 3});
    const RandomVariable g({1, 1, 2, 2});
    const auto step = increase_step(T4, f, g, kPairs);
    REQUIRE(step.has_value());
    CHECK((*step)[0] == doctest::Approx(1.0));
    CHECK((*step)[2] > 2.0);
}

TEST_CASE("iterated increase steps approach the conditional mean") {
    std::mt19937_64 rng(11);
    const std::vector<double> w = testutil::random_weights(rng, 4);
    const Functional T = Functional::linear(w);
    const RandomVariable f = testutil::random_vector(rng, 4, 2.0);
    const auto target = conditional_chisini(T, f, kPairs);

    RandomVariable g = RandomVariable::constant(4, -f.sup_norm());
    for (int it = 0; it < 200; ++it) {
        const auto next = increase_step(T, f, g, kPairs);
        if (!next) break;
        g = *next;
    }
    double dist = 0.0;
    for (std::size_t i = 0; i < 4; ++i) dist = std::max(dist, std::abs(g[i] - target.g[i]));
    CHECK(dist <= 1e-2);
}
