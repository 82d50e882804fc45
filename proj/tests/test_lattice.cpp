#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hdim/errors.hpp"
#include "hdim/lattice.hpp"

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

Rat norm_sq(const Vec<Rat>& v) {
    Rat s(0);
    for (const Rat& x : v) s += x * x;
    return s;
}

// Inverse of a square rational matrix by Gauss-Jordan; the tests use it to
// derive coefficient boxes independently of the library's enumeration.
Mat<Rat> rational_inverse(const Mat<Rat>& b) {
    const int d = b.rows();
    Mat<Rat> aug(d, 2 * d, Rat(0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) aug(i, j) = b(i, j);
        aug(i, d + i) = 1;
    }
    for (int c = 0; c < d; ++c) {
        int p = c;
        while (aug(p, c) == 0) ++p;
        if (p != c)
            for (int j = 0; j < 2 * d; ++j) std::swap(aug(c, j), aug(p, j));
        const Rat piv = aug(c, c);
        for (int j = 0; j < 2 * d; ++j) aug(c, j) /= piv;
        for (int r = 0; r < d; ++r) {
            if (r == c || aug(r, c) == 0) continue;
            const Rat f = aug(r, c);
            for (int j = 0; j < 2 * d; ++j) aug(r, j) -= f * aug(c, j);
        }
    }
    Mat<Rat> inv(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv(i, j) = aug(i, d + j);
    return inv;
}

// Coefficient box that provably contains witnesses of all true minima: for
// any lattice vector v = B c with |v| <= m_d, Cauchy-Schwarz gives
// |c_i| = |row_i(B^{-1}) v| <= |row_i(B^{-1})| m_d.  The claimed m_d comes
// from an actual lattice vector, so it upper-bounds the true m_d and the box
// is sufficient in both failure directions.
long sound_box(const Mat<Rat>& basis, const Rat& claimed_md_sq) {
    const Mat<Rat> inv = rational_inverse(basis);
    const int d = basis.rows();
    Rat worst(0);
    for (int i = 0; i < d; ++i) {
        Rat s(0);
        for (int j = 0; j < d; ++j) s += inv(i, j) * inv(i, j);
        worst = std::max(worst, s);
    }
    return static_cast<long>(std::sqrt(to_double(worst * claimed_md_sq))) + 2;
}

void check_witnesses(const LatticeData& lat) {
    const int d = lat.basis.rows();
    REQUIRE(static_cast<int>(lat.witnesses.size()) == d);
    for (int k = 0; k < d; ++k) {
        // Ambient witness matches its integer coefficients exactly.
        Vec<Rat> v(d, Rat(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) v[i] += lat.basis(i, j) * Rat(lat.witness_coeffs[k][j]);
        CHECK(v == lat.witnesses[k]);
        CHECK(norm_sq(v) == lat.minima_sq[k]);
    }
    // Witness coefficient vectors are linearly independent: integer Gauss rank.
    Mat<Rat> w(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) w(j, k) = Rat(lat.witness_coeffs[k][j]);
    CHECK(det(w) != 0);
}

}  // namespace

TEST_CASE("worked 2x2 example: minima, witnesses, reduced basis, Minkowski") {
    // Columns (3,0) and (1,2): shortest vector (1,2) with |v|^2 = 5, second
    // minimum (-2,2) with |v|^2 = 8 (hand enumeration over small coefficients).
    auto lat = lattice_from_basis(mat2(3, 1, 0, 2));
    CHECK(lat.covolume == Rat(6));
    successive_minima(lat);
    REQUIRE(lat.minima_sq.size() == 2);
    CHECK(lat.minima_sq[0] == Rat(5));
    CHECK(lat.minima_sq[1] == Rat(8));
    CHECK(lat.minima[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(lat.minima[1] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    check_witnesses(lat);

    reduced_basis(lat);
    REQUIRE(lat.reduced.has_value());
    Vec<Rat> v1 = {(*lat.reduced)(0, 0), (*lat.reduced)(1, 0)};
    CHECK(norm_sq(v1) == Rat(5));
    CHECK(std::abs(to_double(det(*lat.reduced))) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(lat.reduction_factor >= 1.0);

    const auto mb = minkowski_bounds(2);
    const double prod = to_double(lat.minima_sq[0] * lat.minima_sq[1]);
    const double ratio = std::sqrt(prod) / to_double(lat.covolume);
    CHECK(ratio >= mb.lower - 1e-12);
    CHECK(ratio <= mb.upper + 1e-12);
    CHECK(lat.minima[0] <= mb.first_minimum_factor * std::sqrt(6.0) + 1e-12);
}

TEST_CASE("random integer lattices agree exactly with certified brute force") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> entry(-4, 4);
    std::uniform_int_distribution<int> dim_pick(2, 3);
    int done = 0;
    while (done < 200) {
        const int d = dim_pick(rng);
        Mat<Rat> b(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b(i, j) = entry(rng);
        if (det(b) == 0) continue;
        auto lat = lattice_from_basis(b);
        successive_minima(lat);
        REQUIRE(static_cast<int>(lat.minima_sq.size()) == d);
        CHECK(std::is_sorted(lat.minima_sq.begin(), lat.minima_sq.end()));
        check_witnesses(lat);

        const long box = sound_box(b, lat.minima_sq.back());
        if (std::pow(2.0 * box + 1.0, d) <= 2e6)
            CHECK(brute_force_minima_sq(lat, box) == lat.minima_sq);

        // Minkowski sandwich on every instance.
        const auto mb = minkowski_bounds(d);
        double prod = 1.0;
        for (double m : lat.minima) prod *= m;
        const double ratio = prod / to_double(lat.covolume);
        CHECK(ratio >= mb.lower * (1.0 - 1e-9));
        CHECK(ratio <= mb.upper * (1.0 + 1e-9));

        reduced_basis(lat);
        REQUIRE(lat.reduced.has_value());
        Vec<Rat> v1(d);
        for (int i = 0; i < d; ++i) v1[i] = (*lat.reduced)(i, 0);
        CHECK(norm_sq(v1) == lat.minima_sq[0]);
        CHECK(lat.reduction_factor >= 1.0);

        // Scaling covariance on a subsample: basis*3 multiplies minima_sq by 9.
        if (done % 10 == 0) {
            Mat<Rat> b3 = b;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) b3(i, j) *= 3;
            auto lat3 = lattice_from_basis(b3);
            successive_minima(lat3);
            for (int k = 0; k < d; ++k)
                CHECK(lat3.minima_sq[k] == lat.minima_sq[k] * 9);
        }
        ++done;
    }
}

TEST_CASE("block-diagonal integer family has exact inverse-power minima") {
    // diag(k^n) + a 5^n-scaled unimodular symmetric block: the inverse lattice
    // is diag(k^{-n}) + 5^{-n} Z^2, so the minima are k^{-n}, 5^{-n}, 5^{-n}.
    for (long k : {150L, 262L}) {
        for (long n = 1; n <= 4; ++n) {
            Mat<Rat> base = mat2(2, 1, 1, 1);
            Mat<Rat> block = Mat<Rat>::identity(2);
            for (long i = 0; i < n; ++i) block = block * base;
            Mat<Rat> m(3, 3, Rat(0));
            m(0, 0) = rat_pow(Rat(k), n);
            const Rat sc = rat_pow(Rat(5), n);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) m(i + 1, j + 1) = sc * block(i, j);
            auto lat = lattice_from_matrix(m);
            CHECK(lat.covolume == Rat(1) / (rat_pow(Rat(k), n) * rat_pow(Rat(25), n)));
            successive_minima(lat);
            const Rat mk = rat_pow(Rat(1, k), 2 * n), m5 = rat_pow(Rat(1, 5), 2 * n);
            CHECK(lat.minima_sq[0] == mk);
            CHECK(lat.minima_sq[1] == m5);
            CHECK(lat.minima_sq[2] == m5);
        }
    }
}

TEST_CASE("h profile closed forms: scaled power and diagonal") {
    // 5*[[2,1],[1,1]] is unimodular up to the scale, so the inverse lattice is
    // 5^{-n} Z^2: both exponents are exactly ln 5.
    const auto fam = MatrixFamily::scaled_power(5, mat2(2, 1, 1, 1));
    for (long n : {1L, 3L}) {
        const auto hp = h_profile(fam, n);
        REQUIRE(hp.h.size() == 2);
        CHECK(hp.h[0] == doctest::Approx(std::log(5.0)).epsilon(1e-12));
        CHECK(hp.h[1] == doctest::Approx(std::log(5.0)).epsilon(1e-12));
        REQUIRE(hp.minima_sq.size() == 2);
        CHECK(hp.minima_sq[0] == rat_pow(Rat(1, 25), n));
        CHECK(hp.minima_sq[1] == rat_pow(Rat(1, 25), n));
    }

    // diag(2^n, 4^n): minima 4^{-n} < 2^{-n}, h = (ln 4, ln 2) exactly.
    const auto dg = MatrixFamily::diagonal(
        {{Rat(2), Rat(4)}, {Rat(4), Rat(16)}, {Rat(8), Rat(64)}});
    const auto hp = h_profile(dg, 3);
    CHECK(hp.h[0] == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(hp.h[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(hp.minima_sq[0] == rat_pow(Rat(1, 16), 3));
    CHECK(hp.minima_sq[1] == rat_pow(Rat(1, 4), 3));
}

TEST_CASE("h profile of a Jordan block converges to the log modulus") {
    // [[2,1],[0,2]]^n = [[2^n, n 2^{n-1}], [0, 2^n]].  The inverse lattice is
    // spanned by (2^{-n}, 0) and 2^{-n}(-n/2, 1); reducing the second column
    // modulo the first leaves 2^{-n}(frac, 1) with frac = dist(n/2, Z).  Even
    // n: both minima exactly 2^{-n}.  Odd n: second minimum 2^{-n} sqrt(5)/2.
    const auto jf = MatrixFamily::jordan({JordanBlockSpec{Rat(2), 2}});
    const double ln2 = std::log(2.0);

    const auto even = h_profile(jf, 20);
    CHECK(even.h[0] == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(even.h[1] == doctest::Approx(ln2).epsilon(1e-12));
    REQUIRE(even.minima_sq.size() == 2);
    CHECK(even.minima_sq[0] == rat_pow(Rat(1, 4), 20));
    CHECK(even.minima_sq[1] == rat_pow(Rat(1, 4), 20));

    const auto odd = h_profile(jf, 21);
    CHECK(odd.minima_sq[0] == rat_pow(Rat(1, 4), 21));
    CHECK(odd.minima_sq[1] == Rat(5, 4) * rat_pow(Rat(1, 4), 21));
    CHECK(odd.h[0] == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(odd.h[1] == doctest::Approx(ln2 - std::log(1.25) / 42.0).epsilon(1e-12));
}

TEST_CASE("lattice points in a ball match hand counts and brute force") {
    const Mat<Rat> id = Mat<Rat>::identity(2);
    const Vec<Rat> center = {Rat(1, 2), Rat(1, 2)};
    // All four unit-square corners sit at squared distance exactly 1/2.
    auto pts = lattice_points_in_ball(id, center, Rat(1, 2), 100);
    CHECK(pts.size() == 4);
    CHECK(lattice_points_in_ball(id, center, Rat(1, 4), 100).empty());

    // Skewed basis vs an exhaustive coefficient scan with exact distances.
    const Mat<Rat> b = mat2(2, 1, 1, 3);
    const Vec<Rat> target = {Rat(1, 3), Rat(-2, 7)};
    const Rat r_sq(9);
    auto got = lattice_points_in_ball(b, target, r_sq, 1000);
    std::vector<std::pair<BigInt, BigInt>> got_set, want_set;
    for (const auto& c : got) got_set.emplace_back(c[0], c[1]);
    for (long c0 = -6; c0 <= 6; ++c0)
        for (long c1 = -6; c1 <= 6; ++c1) {
            const Vec<Rat> v = {b(0, 0) * c0 + b(0, 1) * c1 - target[0],
                                b(1, 0) * c0 + b(1, 1) * c1 - target[1]};
            if (norm_sq(v) <= r_sq) want_set.emplace_back(c0, c1);
        }
    std::sort(got_set.begin(), got_set.end());
    std::sort(want_set.begin(), want_set.end());
    CHECK(got_set == want_set);
    CHECK_FALSE(want_set.empty());
}

TEST_CASE("error paths: budgets, boxes, singular input") {
    auto lat = lattice_from_basis(mat2(3, 1, 0, 2));
    successive_minima(lat);
    CHECK_THROWS_AS((void)brute_force_minima_sq(lat, 0), Error);
    try {
        (void)brute_force_minima_sq(lat, 1);
        FAIL("expected InsufficientBox");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientBox);
    }

    Mat<Rat> big(4, 4, Rat(0));
    big(0, 0) = 7; big(1, 1) = 5; big(2, 2) = 3; big(3, 3) = 2;
    big(0, 1) = 3; big(0, 2) = 1; big(1, 2) = 2; big(2, 3) = 1; big(1, 3) = 4;
    auto lat4 = lattice_from_basis(big);
    try {
        successive_minima(lat4, 2);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
        CHECK(std::string(e.what()).find("certified") != std::string::npos);
    }

    try {
        (void)lattice_points_in_ball(Mat<Rat>::identity(2), {Rat(0), Rat(0)}, Rat(100), 10);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }

    CHECK_THROWS_AS((void)lattice_from_basis(mat2(1, 2, 2, 4)), Error);
    CHECK_THROWS_AS((void)lattice_from_matrix(mat2(0, 0, 0, 0)), Error);
}
