#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hdim/errors.hpp"
#include "hdim/formulas.hpp"

using namespace hdim;

namespace {

Mat<Rat> mat2(int a, int b, int c, int d) {
    Mat<Rat> m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

// Moduli of 5*[[2,1],[1,1]]: 5 phi^{-2} and 5 phi^2.
constexpr double kMod1 = 1.9098300562505257;
constexpr double kMod2 = 13.090169943749475;

}  // namespace

TEST_CASE("diagonalizable formula: worked values and degenerate limits") {
    const double e1 = std::exp(1.0), e2 = std::exp(2.0);
    CHECK(formula_diagonalizable({e1, e2}, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(formula_hat({e1, e2}, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // Equal moduli c: the value collapses to d ln c / (tau + ln c).
    const double lc = std::log(3.0);
    CHECK(formula_diagonalizable({3.0, 3.0, 3.0}, 1.0) ==
          doctest::Approx(3.0 * lc / (1.0 + lc)).epsilon(1e-12));

    // tau = 0 gives full dimension regardless of the moduli.
    CHECK(formula_diagonalizable({2.0, 5.0}, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(formula_hat({2.0, 5.0}, 0.0) == doctest::Approx(2.0).epsilon(1e-12));

    // The hat value never falls below the diagonalizable value, and both are
    // nonincreasing in tau.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mod(1.05, 20.0), tau(0.0, 3.0);
    std::uniform_int_distribution<int> dims(1, 5);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = dims(rng);
        std::vector<double> ms(d);
        for (double& m : ms) m = mod(rng);
        const double t1 = tau(rng), t2 = t1 + 0.25;
        const double lo = formula_diagonalizable(ms, t1), hat = formula_hat(ms, t1);
        CHECK(lo <= hat + 1e-12);
        CHECK(hat <= d + 1e-12);
        CHECK(lo >= -1e-12);
        CHECK(formula_diagonalizable(ms, t2) <= lo + 1e-12);
        CHECK(formula_hat(ms, t2) <= hat + 1e-12);
    }

    CHECK_THROWS_AS((void)formula_diagonalizable({1.0, 2.0}, 1.0), Error);
    try {
        (void)formula_diagonalizable({0.5, 2.0}, 1.0);
        FAIL("expected NotExpanding");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotExpanding);
    }
}

TEST_CASE("jordan formula: single block value and size-1 reduction") {
    // One block of modulus 2 and size 3: all three exponents are ln 2, so the
    // value is 3 ln 2 / (tau + ln 2).
    const double l2 = std::log(2.0);
    CHECK(formula_jordan({JordanBlockSpec{Rat(2), 3}}, 1.0) ==
          doctest::Approx(3.0 * l2 / (1.0 + l2)).epsilon(1e-12));
    CHECK(formula_jordan({JordanBlockSpec{Rat(2), 3}}, 1.0) ==
          doctest::Approx(1.2281516725510762).epsilon(1e-12));
    CHECK(formula_jordan({JordanBlockSpec{Rat(2), 3}}, 0.0) ==
          doctest::Approx(3.0).epsilon(1e-12));

    // Size-1 blocks reduce to the diagonalizable formula.
    for (int k = 1; k <= 20; ++k) {
        const double tau = 0.1 * k;
        CHECK(formula_jordan({JordanBlockSpec{Rat(2), 1}, JordanBlockSpec{Rat(2), 1}}, tau) ==
              doctest::Approx(formula_diagonalizable({2.0, 2.0}, tau)).epsilon(1e-12));
    }
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> num(2, 9), cnt(1, 4);
    std::uniform_real_distribution<double> tau(0.05, 2.5);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = cnt(rng);
        std::vector<JordanBlockSpec> blocks;
        std::vector<double> ms;
        for (int i = 0; i < d; ++i) {
            const int m = num(rng);
            blocks.push_back({Rat(m), 1});
            ms.push_back(static_cast<double>(m));
        }
        const double t = tau(rng);
        CHECK(formula_jordan(blocks, t) ==
              doctest::Approx(formula_diagonalizable(ms, t)).epsilon(1e-12));
    }

    CHECK_THROWS_AS((void)formula_jordan({JordanBlockSpec{Rat(1), 2}}, 1.0), Error);
}

TEST_CASE("counterexample family formula: frozen sweep values") {
    const Mat<Rat> a = mat2(2, 1, 1, 1);
    const BigInt lam(5);

    const struct { double tau, want; } grid[] = {
        {0.5, 1.6744644966458684}, {1.9, 1.1502420307863228},
        {2.0, 1.1250828693583480}, {2.6, 0.9913340579457043},
        {3.0, 0.8826057682661933},
    };
    for (const auto& g : grid) {
        const double got = formula_counterexample(lam, a, g.tau);
        CHECK(got == doctest::Approx(g.want).epsilon(1e-12));
        // By construction this is the hat value of the scaled moduli.
        CHECK(got == doctest::Approx(formula_hat({kMod1, kMod2}, g.tau)).epsilon(1e-12));
    }
}

TEST_CASE("counterexample family hypotheses are enforced") {
    auto expect_invalid = [](const BigInt& lam, const Mat<Rat>& a) {
        try {
            (void)formula_counterexample(lam, a, 1.0);
            FAIL_CHECK("expected InvalidCounterexampleFamily");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidCounterexampleFamily);
        }
    };
    expect_invalid(5, mat2(1, 1, 0, 1));   // asymmetric
    expect_invalid(5, mat2(0, 1, 1, 0));   // eigenvalues on the unit circle
    expect_invalid(5, mat2(2, 0, 0, 2));   // determinant 4
    expect_invalid(1, mat2(2, 1, 1, 1));   // scaled family not expanding
}

TEST_CASE("block example formula: frozen values and regime boundaries") {
    const struct { double tau, want; } grid[] = {
        {0.5, 2.6744644966458684}, {1.0, 2.4400678847781770},
        {1.2, 2.3637094150466766}, {2.0, 2.1250828693583480},
        {3.0, 1.8826057682661932}, {5.0, 1.4147204806073468},
    };
    for (const auto& g : grid)
        CHECK(formula_example1(262, g.tau) == doctest::Approx(g.want).epsilon(1e-12));

    // Small tau: the value is 1 + 2 l_2 / (tau + l_2) with l_2 = ln(5 phi^2).
    const double l2 = std::log(kMod2);
    for (double tau : {0.1, 0.5, 1.0, 1.2}) {
        CHECK(formula_example1(262, tau) ==
              doctest::Approx(1.0 + 2.0 * l2 / (tau + l2)).epsilon(1e-12));
        // In that regime the value does not depend on k.
        CHECK(formula_example1(262, tau) ==
              doctest::Approx(formula_example1(5000, tau)).epsilon(1e-12));
    }
    CHECK(formula_example1(262, 0.0) == doctest::Approx(3.0).epsilon(1e-12));

    // k must exceed lambda_2^{3/2} = 47.36...: 48 passes, 47 throws.
    CHECK(formula_example1(48, 1.0) > 0.0);
    try {
        (void)formula_example1(47, 1.0);
        FAIL("expected HypothesisViolated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HypothesisViolated);
    }
}

TEST_CASE("one-dimensional sequences: values and logs") {
    CHECK(seq_value(SeqSpec::geometric(Rat(3), Rat(2)), 5) == doctest::Approx(96.0));
    CHECK(log_seq(SeqSpec::geometric(Rat(3), Rat(2)), 5) ==
          doctest::Approx(std::log(96.0)).epsilon(1e-12));
    CHECK(seq_value(SeqSpec::polynomial(Rat(2), 3), 4) == doctest::Approx(128.0));
    // Deep geometric tails keep their exponents through the log path.
    CHECK(log_seq(SeqSpec::geometric(Rat(1), Rat(2)), 5000) ==
          doctest::Approx(5000.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("one-dimensional formula: closed forms and estimate flags") {
    const double l2 = std::log(2.0);

    auto f = formula_1d(SeqSpec::geometric(Rat(1), Rat(2)), PsiSpec::exponential(Rat(1)), 4000);
    CHECK(f.exact);
    CHECK_FALSE(f.lower_bound_only);
    CHECK(f.value == doctest::Approx(l2 / (l2 + 1.0)).epsilon(1e-12));

    f = formula_1d(SeqSpec::geometric(Rat(1), Rat(2)), PsiSpec::geometric(Rat(1), Rat(2)), 4000);
    CHECK(f.exact);
    CHECK(f.value == doctest::Approx(0.5).epsilon(1e-12));

    // Constant psi (geometric with ratio 1): tau = 0, value capped at 1.
    f = formula_1d(SeqSpec::geometric(Rat(1), Rat(4)), PsiSpec::geometric(Rat(1), Rat(1)), 4000);
    CHECK(f.exact);
    CHECK(f.value == doctest::Approx(1.0).epsilon(1e-12));

    // Power-law psi against geometric growth: a tail-window estimate creeping
    // up to 1, not a closed form.
    f = formula_1d(SeqSpec::geometric(Rat(1), Rat(2)), PsiSpec::power_law(Rat(2)), 4000);
    CHECK_FALSE(f.exact);
    CHECK_FALSE(f.lower_bound_only);
    CHECK(f.value == doctest::Approx(0.9940526900).epsilon(1e-8));
    CHECK(f.value < 1.0);

    // Polynomial sequences have growth rate zero: lower bound only.
    f = formula_1d(SeqSpec::polynomial(Rat(1), 1), PsiSpec::power_law(Rat(1)), 4000);
    CHECK(f.lower_bound_only);
    CHECK_FALSE(f.exact);
    CHECK(f.value == doctest::Approx(0.5).epsilon(1e-12));

    f = formula_1d(SeqSpec::polynomial(Rat(2), 3), PsiSpec::power_law(Rat(2)), 4000);
    CHECK(f.lower_bound_only);
    CHECK(f.value == doctest::Approx(0.6068659354).epsilon(1e-8));

    f = formula_1d(SeqSpec::polynomial(Rat(1), 1), PsiSpec::exponential(Rat(1)), 4000);
    CHECK(f.lower_bound_only);
    CHECK(f.value < 0.01);
}

TEST_CASE("critical exponent bisection agrees with the closed forms") {
    auto c = critical_exponent_check(SeqSpec::geometric(Rat(1), Rat(2)),
                                     PsiSpec::geometric(Rat(1), Rat(2)), 4000);
    CHECK(c.agree);
    CHECK(c.formula == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.critical == doctest::Approx(0.5).epsilon(0.02));

    c = critical_exponent_check(SeqSpec::geometric(Rat(1), Rat(4)),
                                PsiSpec::geometric(Rat(1), Rat(1)), 4000);
    CHECK(c.agree);
    CHECK(c.formula == doctest::Approx(1.0).epsilon(1e-12));

    c = critical_exponent_check(SeqSpec::geometric(Rat(1), Rat(3)),
                                PsiSpec::exponential(Rat(2)), 4000);
    CHECK(c.agree);
    const double l3 = std::log(3.0);
    CHECK(c.formula == doctest::Approx(l3 / (l3 + 2.0)).epsilon(1e-12));

    try {
        (void)critical_exponent_check(SeqSpec::polynomial(Rat(1), 2),
                                      PsiSpec::power_law(Rat(3)), 4000);
        FAIL("expected Inconclusive");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inconclusive);
    }
}
