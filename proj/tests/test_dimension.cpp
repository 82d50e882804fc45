#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hdim/dimension.hpp"
#include "hdim/errors.hpp"

using namespace hdim;

namespace {

SpectralProfile<Rat> rat_profile(Rat tau, Vec<Rat> l, std::optional<Vec<Rat>> h = {}) {
    SpectralProfile<Rat> p;
    p.n = 1;
    p.tau = std::move(tau);
    p.l = std::move(l);
    p.h = std::move(h);
    return p;
}

SpectralProfile<double> dbl_profile(double tau, Vec<double> l,
                                    std::optional<Vec<double>> h = {}) {
    SpectralProfile<double> p;
    p.n = 1;
    p.tau = tau;
    p.l = std::move(l);
    p.h = std::move(h);
    return p;
}

Mat<Rat> mat2(int a, int b, int c, int d) {
    Mat<Rat> m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

template <class T, class F>
T min_over_pivots(const SpectralProfile<T>& p, F f) {
    T best = f(p, 0);
    for (int i = 1; i < static_cast<int>(p.l.size()); ++i) best = std::min(best, f(p, i));
    return best;
}

Rat min_dimnumber(const DimInputs<Rat>& inp) {
    Rat best = s_dimnumber(inp, 0);
    for (int i = 1; i < static_cast<int>(inp.u.size()); ++i)
        best = std::min(best, s_dimnumber(inp, i));
    return best;
}

double min_dimnumber_d(const DimInputs<double>& inp) {
    double best = s_dimnumber(inp, 0);
    for (int i = 1; i < static_cast<int>(inp.u.size()); ++i)
        best = std::min(best, s_dimnumber(inp, i));
    return best;
}

}  // namespace

TEST_CASE("index sets on the worked two-exponent profile") {
    const auto p = rat_profile(Rat(1), {Rat(1), Rat(2)}, Vec<Rat>{Rat(2), Rat(1)});

    auto s0 = index_sets(p, 0, true);
    CHECK(s0.k1.empty());            // no l_j > 2
    CHECK(s0.k2.empty());            // no l_j < 1
    CHECK(s0.gamma == std::vector<int>{0});  // h = 2 >= t = 2, loose
    CHECK(s0.has_gamma);

    auto s1 = index_sets(p, 1, true);
    CHECK(s1.k1.empty());
    CHECK(s1.k2 == std::vector<int>{0});
    CHECK(s1.gamma.empty());

    // Smaller tau moves l_2 above the threshold and h_1 into gamma.
    const auto q = rat_profile(Rat(1, 2), {Rat(1), Rat(2)}, Vec<Rat>{Rat(2), Rat(1)});
    auto t0 = index_sets(q, 0, true);
    CHECK(t0.k1 == std::vector<int>{1});
    CHECK(t0.k2.empty());
    CHECK(t0.gamma == std::vector<int>{0});

    // Strictness: a double l_j equal to the threshold within 1e-12 stays out
    // of k1; an h_j equal to it stays inside gamma.
    const auto dp = dbl_profile(1.0, {1.0, 2.0 + 5e-13}, Vec<double>{2.0 - 5e-13, 1.0});
    auto ds = index_sets(dp, 0, true);
    CHECK(ds.k1.empty());
    CHECK(ds.gamma == std::vector<int>{0});
}

TEST_CASE("per-pivot values on the worked profile are exact rationals") {
    const auto p = rat_profile(Rat(1), {Rat(1), Rat(2)}, Vec<Rat>{Rat(2), Rat(1)});

    CHECK(s_hat_n(p, 0) == Rat(3, 2));
    CHECK(s_lower_n(p, 0) == Rat(3, 2));
    CHECK(s_upper_n(p, 0) == Rat(3, 2));

    CHECK(s_hat_n(p, 1) == Rat(4, 3));
    CHECK(s_lower_n(p, 1) == Rat(4, 3));
    CHECK(s_upper_n(p, 1) == Rat(4, 3));

    CHECK(min_over_pivots(p, [](const auto& pr, int i) { return s_hat_n(pr, i); }) ==
          Rat(4, 3));
}

TEST_CASE("expanding denominator and missing h are typed errors") {
    // t = tau + l_pivot = exactly 1/10^9 is not expanding; slightly more is.
    const auto edge = rat_profile(Rat(1, 1000000000), {Rat(0), Rat(2)});
    CHECK_THROWS_AS((void)s_hat_n(edge, 0), Error);
    try {
        (void)s_lower_n(edge, 0);
        FAIL("expected NonExpandingDenominator");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonExpandingDenominator);
    }
    const auto ok = rat_profile(Rat(1, 1000000000) + Rat(1, 1000000000000), {Rat(0), Rat(2)});
    CHECK(s_hat_n(ok, 0) > Rat(0));

    const auto no_h = rat_profile(Rat(1), {Rat(1), Rat(2)});
    CHECK(s_hat_n(no_h, 0) == Rat(3, 2));  // hat and lower do not need h
    try {
        (void)s_upper_n(no_h, 0);
        FAIL("expected MissingHProfile");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingHProfile);
    }
    CHECK_THROWS_AS((void)index_sets(no_h, 0, true), Error);
}

TEST_CASE("hat dominates lower and upper at every pivot") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lv(0.05, 3.0), tv(0.1, 3.0);
    std::uniform_int_distribution<int> dims(1, 5);
    for (int rep = 0; rep < 300; ++rep) {
        const int d = dims(rng);
        Vec<double> l(d), h(d);
        for (int i = 0; i < d; ++i) l[i] = lv(rng);
        for (int i = 0; i < d; ++i) h[i] = lv(rng);
        std::sort(l.begin(), l.end());
        std::sort(h.begin(), h.end(), std::greater<>());
        const auto p = dbl_profile(tv(rng), l, h);
        for (int i = 0; i < d; ++i) {
            CHECK(s_lower_n(p, i) <= s_hat_n(p, i) + 1e-12);
            CHECK(s_upper_n(p, i) <= s_hat_n(p, i) + 1e-12);
        }
        // The hat and lower per-n values (minima over pivots) land in [0, d];
        // they depend only on the positive l.  The upper value inherits the
        // ceiling through dominance but can drop below zero here because a
        // freely drawn h is not the exponent profile of any actual lattice.
        const double mh = min_over_pivots(p, [](const auto& pr, int i) { return s_hat_n(pr, i); });
        const double ml = min_over_pivots(p, [](const auto& pr, int i) { return s_lower_n(pr, i); });
        const double mu = min_over_pivots(p, [](const auto& pr, int i) { return s_upper_n(pr, i); });
        for (double v : {mh, ml}) {
            CHECK(v >= -1e-12);
            CHECK(v <= d + 1e-12);
        }
        CHECK(mu <= d + 1e-12);
    }
}

TEST_CASE("diagonal profiles: upper equals lower exactly at every pivot") {
    // When h is the descending mirror of l (the diagonal situation), the gamma
    // sum reproduces the k1 sum term for term, so the equality is exact.
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> num(1, 12), den(1, 4), dims(1, 5);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = dims(rng);
        Vec<Rat> l(d);
        for (int i = 0; i < d; ++i) l[i] = Rat(num(rng), den(rng));
        std::sort(l.begin(), l.end());
        Vec<Rat> h(l.rbegin(), l.rend());
        const auto p = rat_profile(Rat(num(rng), 4), l, h);
        for (int i = 0; i < d; ++i) CHECK(s_upper_n(p, i) == s_lower_n(p, i));
    }
}

TEST_CASE("per-pivot values are nonincreasing in tau") {
    const Vec<Rat> l = {Rat(1), Rat(2)};
    const Vec<Rat> h = {Rat(2), Rat(1)};
    for (int pivot = 0; pivot < 2; ++pivot) {
        Rat prev_hat, prev_low, prev_up;
        for (int k = 1; k <= 16; ++k) {
            const auto p = rat_profile(Rat(k, 4), l, h);
            const Rat sh = s_hat_n(p, pivot), sl = s_lower_n(p, pivot),
                      su = s_upper_n(p, pivot);
            if (k > 1) {
                CHECK(sh <= prev_hat);
                CHECK(sl <= prev_low);
                CHECK(su <= prev_up);
            }
            prev_hat = sh;
            prev_low = sl;
            prev_up = su;
        }
    }
}

TEST_CASE("numeric sweep rows, aggregates, and the diagonal regime") {
    // Log-scale diagonal rows (n, 2n)/n give the constant profile l = (1, 2);
    // with tau = 1 every row minimizes at pivot 2 with value 4/3.
    std::vector<Vec<Rat>> rows;
    for (int n = 1; n <= 6; ++n) rows.push_back({Rat(n), Rat(2 * n)});
    const auto fam = MatrixFamily::diagonal(rows, true);
    const auto rep = dimension_bounds(fam, PsiSpec::exponential(Rat(1)), 1, 6,
                                      BoundsMode::Numeric);
    REQUIRE(rep.rows.size() == 6);
    for (const auto& r : rep.rows) {
        CHECK(r.tau_n == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.s_hat == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(r.s_lower == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(r.s_upper == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(r.arg_hat == 2);
        CHECK(r.arg_lower == 2);
        CHECK(r.arg_upper == 2);
    }
    CHECK(rep.s_hat == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(rep.s_lower == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(rep.s_upper == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(rep.regime == "diagonal");
    CHECK(rep.oscillation == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(rep.analytic);

    // Aggregates are the tail-window maxima of the row minima.
    double wl = 0, wu = 0, wh = 0;
    const long start = tail_window_start(1, 6);
    for (const auto& r : rep.rows)
        if (r.n >= start) {
            wl = std::max(wl, r.s_lower);
            wu = std::max(wu, r.s_upper);
            wh = std::max(wh, r.s_hat);
        }
    CHECK(rep.s_lower == wl);
    CHECK(rep.s_upper == wu);
    CHECK(rep.s_hat == wh);
}

TEST_CASE("scaled-power families: analytic mode equals the stationary sweep") {
    const auto fam = MatrixFamily::scaled_power(5, mat2(2, 1, 1, 1));
    const auto psi = PsiSpec::exponential(Rat(1, 2));
    const auto an = dimension_bounds(fam, psi, 1, 1, BoundsMode::Analytic);
    const auto nu = dimension_bounds(fam, psi, 1, 1, BoundsMode::Numeric);
    CHECK(an.analytic);
    CHECK(an.rows.empty());
    CHECK(an.s_lower == doctest::Approx(nu.s_lower).epsilon(1e-9));
    CHECK(an.s_upper == doctest::Approx(nu.s_upper).epsilon(1e-9));
    CHECK(an.s_hat == doctest::Approx(nu.s_hat).epsilon(1e-9));

    CHECK(an.s_lower == doctest::Approx(1.5640856295972252).epsilon(1e-12));
    CHECK(an.s_hat == doctest::Approx(1.6744644966458684).epsilon(1e-12));
    CHECK(nu.regime == "generic");

    // For these families the minimal upper value coincides with the minimal
    // hat value, row by row.
    for (int ti : {2, 5, 10, 25}) {
        const auto rep = dimension_bounds(fam, PsiSpec::exponential(Rat(ti, 10)), 1, 6,
                                          BoundsMode::Numeric);
        for (const auto& r : rep.rows)
            CHECK(std::abs(r.s_upper - r.s_hat) <= 1e-9);
    }

    // High tau collapses all three (frozen from the sweep).
    const auto co = dimension_bounds(fam, PsiSpec::exponential(Rat(5, 2)), 1, 6,
                                     BoundsMode::Numeric);
    CHECK(co.regime == "coincide");
    CHECK(co.s_lower == doctest::Approx(1.0141686758731503).epsilon(1e-12));
    CHECK(co.s_upper == doctest::Approx(co.s_lower).epsilon(1e-12));
    CHECK(co.s_hat == doctest::Approx(co.s_lower).epsilon(1e-12));
}

TEST_CASE("jordan sweeps approach the analytic limit like log n over n") {
    const auto jf = MatrixFamily::jordan({JordanBlockSpec{Rat(2), 2}});
    const auto psi = PsiSpec::exponential(Rat(1));
    const auto an = dimension_bounds(jf, psi, 1, 1, BoundsMode::Analytic);
    const double limit = 2.0 * std::log(2.0) / (1.0 + std::log(2.0));
    CHECK(an.s_lower == doctest::Approx(limit).epsilon(1e-12));
    CHECK(an.s_upper == doctest::Approx(limit).epsilon(1e-12));
    CHECK(an.s_hat == doctest::Approx(limit).epsilon(1e-12));

    double prev = 2.0;
    for (long hi : {30L, 60L, 120L}) {
        const auto rep = dimension_bounds(jf, psi, hi - 20, hi, BoundsMode::Numeric);
        const double eps = std::log(static_cast<double>(hi)) / static_cast<double>(hi);
        // The nilpotent part perturbs l and h by O(log n / n); the gap between
        // the upper and lower aggregates and the distance to the limit are
        // both controlled by that scale (measured well inside it).
        CHECK(std::abs(rep.s_upper - rep.s_lower) <= eps);
        CHECK(rep.s_lower >= limit - 1e-12);
        CHECK(rep.s_lower - limit <= eps);
        CHECK(rep.s_lower <= prev + 1e-12);
        prev = rep.s_lower;
    }
}

TEST_CASE("weighted dimensional numbers: worked values") {
    const auto inp = make_dim_inputs<Rat>({Rat(1), Rat(2)}, {Rat(2), Rat(3)});
    CHECK(s_dimnumber(inp, 0) == Rat(3, 2));
    CHECK(s_dimnumber(inp, 1) == Rat(4, 3));
    CHECK(s_frak(inp, Rat(5, 2)) == Rat(7, 5));
    CHECK(s_frak(inp, Rat(2)) == s_dimnumber(inp, 0));
    CHECK(s_frak(inp, Rat(3)) == s_dimnumber(inp, 1));
    CHECK(s_frak(inp, Rat(1)) == Rat(2));

    // The minimum over coordinates and the breakpoint minimum agree at 4/3.
    CHECK(min_dimnumber(inp) == Rat(4, 3));
    Rat bp_min = s_frak(inp, Rat(1));
    for (const Rat& a : {Rat(2), Rat(3)}) bp_min = std::min(bp_min, s_frak(inp, a));
    CHECK(bp_min == Rat(4, 3));
    CHECK(min_equivalence_check(inp));
    CHECK(breakpoint_identity_check(inp));

    // u = v everywhere: every coordinate value is the total weight.
    const auto flat = make_dim_inputs<Rat>({Rat(2), Rat(2), Rat(2)},
                                           {Rat(2), Rat(2), Rat(2)});
    for (int i = 0; i < 3; ++i) CHECK(s_dimnumber(flat, i) == Rat(3));

    // An infinite coordinate contributes the finite-coordinate weight sum.
    auto winf = make_dim_inputs<Rat>({Rat(1), Rat(2)}, {Rat(2), Rat(0)},
                                     {false, true}, {Rat(1), Rat(3)});
    CHECK(s_dimnumber(winf, 1) == Rat(1));

    // Weighted variant keeps exact arithmetic.
    const auto wtd = make_dim_inputs<Rat>({Rat(1), Rat(2)}, {Rat(2), Rat(3)}, {},
                                          {Rat(1, 2), Rat(2)});
    CHECK(s_dimnumber(wtd, 0) == Rat(1, 2) * Rat(1, 2) + Rat(2) * Rat(1));
}

TEST_CASE("dimensional number input validation and breakpoint errors") {
    CHECK_THROWS_AS((void)make_dim_inputs<Rat>({Rat(0)}, {Rat(1)}), Error);
    CHECK_THROWS_AS((void)make_dim_inputs<Rat>({Rat(2)}, {Rat(1)}), Error);
    CHECK_THROWS_AS((void)make_dim_inputs<Rat>({Rat(1), Rat(1)}, {Rat(2)}), Error);
    CHECK_THROWS_AS((void)make_dim_inputs<Rat>({Rat(1)}, {Rat(2)}, {}, {Rat(0)}), Error);

    const auto inp = make_dim_inputs<Rat>({Rat(1)}, {Rat(2)});
    try {
        (void)s_frak(inp, Rat(0));
        FAIL("expected InvalidBreakpoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidBreakpoint);
    }
    CHECK_THROWS_AS((void)s_frak(inp, Rat(-1)), Error);
}

TEST_CASE("random rational inputs satisfy both breakpoint identities") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> num(1, 12), den(1, 4), gap(0, 8), dims(1, 4);
    for (int rep = 0; rep < 250; ++rep) {
        const int d = dims(rng);
        Vec<Rat> u(d), v(d), delta(d);
        for (int i = 0; i < d; ++i) {
            u[i] = Rat(num(rng), den(rng));
            v[i] = u[i] + Rat(gap(rng), den(rng));  // gap 0 makes ties u_i = v_i
            delta[i] = Rat(num(rng), den(rng));
        }
        const auto inp = make_dim_inputs<Rat>(u, v, {}, delta);
        CHECK(min_equivalence_check(inp));
        CHECK(breakpoint_identity_check(inp));
    }

    // Explicit tie between u and v on the first coordinate.
    const auto tie = make_dim_inputs<Rat>({Rat(1), Rat(2)}, {Rat(1), Rat(3)});
    CHECK(min_equivalence_check(tie));
    CHECK(breakpoint_identity_check(tie));
}

TEST_CASE("dimensional numbers are continuous along convergent inputs") {
    // u(n) -> u and v(n) -> v coordinatewise, one coordinate diverging to
    // infinity; the minimum over coordinates converges with rate O(1/n).
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pert(-1.0, 1.0);
    const Vec<double> u = {1.0, 2.0, 0.5};
    const Vec<double> v = {2.0, 3.0, 0.0};
    const std::vector<bool> v_inf = {false, false, true};
    const Vec<double> delta = {1.0, 1.0, 2.0};
    const auto limit = make_dim_inputs<double>(u, v, v_inf, delta);
    const double target = min_dimnumber_d(limit);

    for (int rep = 0; rep < 50; ++rep) {
        for (double n : {1e2, 1e3, 1e4}) {
            Vec<double> un(3), vn(3);
            for (int i = 0; i < 3; ++i) un[i] = u[i] + pert(rng) / n;
            vn[0] = v[0] + pert(rng) / n;
            vn[1] = v[1] + pert(rng) / n;
            vn[2] = n;
            const auto inp = make_dim_inputs<double>(un, vn, {}, delta);
            CHECK(std::abs(min_dimnumber_d(inp) - target) <= 10.0 / n);
        }
    }
}
