#include <doctest.h>

#include <cmath>
#include <random>

#include "hdim/errors.hpp"
#include "hdim/spectra.hpp"
#include "oracle_eigen.hpp"

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

const PsiSpec kPsiHalf = PsiSpec::exponential(Rat(1, 2));

}  // namespace

TEST_CASE("symmetric 2x2 worked matrix has golden-ratio singular values") {
    // 5*[[2,1],[1,1]] is symmetric positive definite; its singular values are
    // its eigenvalues 5*(3 -+ sqrt 5)/2.
    const auto fam = MatrixFamily::scaled_power(5, mat2(2, 1, 1, 1));
    const double s5 = std::sqrt(5.0);
    const double lo = 5.0 * (3.0 - s5) / 2.0, hi = 5.0 * (3.0 + s5) / 2.0;

    const auto prof = spectral_profile(fam, kPsiHalf, 1);
    REQUIRE(prof.l.size() == 2);
    CHECK(prof.l[0] == doctest::Approx(std::log(lo)).epsilon(1e-12));
    CHECK(prof.l[1] == doctest::Approx(std::log(hi)).epsilon(1e-12));
    CHECK(prof.l[0] == doctest::Approx(0.6470142623148935).epsilon(1e-12));
    CHECK(prof.l[1] == doctest::Approx(2.5718615625533072).epsilon(1e-12));
    CHECK(prof.tau == doctest::Approx(0.5).epsilon(1e-15));

    // Independent oracle agreement on the same matrix.
    const auto sv = oracle_singular_values(generate_matrix_exact(fam, 1));
    CHECK(std::log(sv[0]) == doctest::Approx(prof.l[0]).epsilon(1e-9));
    CHECK(std::log(sv[1]) == doctest::Approx(prof.l[1]).epsilon(1e-9));
}

TEST_CASE("profiles agree with the SVD oracle on random integer matrices") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> entry(-5, 5);
    std::uniform_int_distribution<int> dims(2, 4);
    int done = 0;
    while (done < 50) {
        const int d = dims(rng);
        std::vector<Mat<Rat>> ms;
        Mat<Rat> m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = entry(rng);
        if (det(m) == 0) continue;
        ms.push_back(m);
        const auto fam = MatrixFamily::explicit_list(ms);
        const auto prof = spectral_profile(fam, kPsiHalf, 1);
        const auto sv = oracle_singular_values(m);
        REQUIRE(prof.l.size() == sv.size());
        for (std::size_t i = 0; i < sv.size(); ++i)
            CHECK(prof.l[i] == doctest::Approx(std::log(sv[i])).epsilon(1e-8));
        ++done;
    }
}

TEST_CASE("scaled-power profiles are independent of n") {
    const auto fam = MatrixFamily::scaled_power(5, mat2(2, 1, 1, 1));
    const auto base = spectral_profile(fam, kPsiHalf, 1);
    for (long n = 2; n <= 6; ++n) {
        const auto prof = spectral_profile(fam, kPsiHalf, n);
        for (std::size_t i = 0; i < base.l.size(); ++i)
            CHECK(prof.l[i] == doctest::Approx(base.l[i]).epsilon(1e-11));
    }
}

TEST_CASE("log-scale diagonal families bypass the eigensolver exactly") {
    const auto fam = MatrixFamily::diagonal({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}, true);
    const auto prof = spectral_profile(fam, PsiSpec::exponential(Rat(1)), 2);
    CHECK(prof.l[0] == 1.0);
    CHECK(prof.l[1] == 2.0);

    const auto exact = spectral_profile_exact(fam, PsiSpec::exponential(Rat(1)), 2);
    REQUIRE(exact.has_value());
    CHECK(exact->l[0] == Rat(1));
    CHECK(exact->l[1] == Rat(2));
    CHECK(exact->tau == Rat(1));
    REQUIRE(exact->h.has_value());
    CHECK((*exact->h)[0] == Rat(2));
    CHECK((*exact->h)[1] == Rat(1));

    // Plain-scale diagonal and non-exponential psi have no exact profile.
    const auto plain = MatrixFamily::diagonal({{Rat(2), Rat(4)}});
    CHECK_FALSE(spectral_profile_exact(plain, PsiSpec::exponential(Rat(1)), 1).has_value());
    CHECK_FALSE(spectral_profile_exact(fam, PsiSpec::power_law(Rat(2)), 1).has_value());
}

TEST_CASE("accumulation set: analytic singleton matches clustered estimate") {
    const auto fam = MatrixFamily::scaled_power(5, mat2(2, 1, 1, 1));
    const auto analytic =
        accumulation_set(fam, kPsiHalf, AccumulationMode::Analytic, 1, 1);
    REQUIRE(analytic.points.size() == 1);
    CHECK(analytic.analytic);
    CHECK(analytic.points[0][0] == doctest::Approx(0.6470142623148935).epsilon(1e-12));
    CHECK(analytic.points[0][1] == doctest::Approx(2.5718615625533072).epsilon(1e-12));

    const auto clustered =
        accumulation_set(fam, kPsiHalf, AccumulationMode::Clustered, 1, 40);
    REQUIRE(clustered.points.size() == 1);
    CHECK(clustered.points[0][0] == doctest::Approx(analytic.points[0][0]).epsilon(1e-9));
    CHECK(clustered.points[0][1] == doctest::Approx(analytic.points[0][1]).epsilon(1e-9));
    CHECK(clustered.max_residual < 1e-6);
}

TEST_CASE("stabilization index exists for expanding power families") {
    // [[2,1],[0,3]]^n is non-normal, so its profile converges to (ln 2, ln 3)
    // like (ln sqrt 2)/n; a loose eps stabilizes within a short range.
    const auto fam = MatrixFamily::power(mat2(2, 1, 0, 3));
    const auto analytic =
        accumulation_set(fam, kPsiHalf, AccumulationMode::Analytic, 1, 1);
    REQUIRE(analytic.points.size() == 1);
    CHECK(analytic.points[0][0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(analytic.points[0][1] == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    const auto n0 = stabilization_index(fam, kPsiHalf, 5e-2, 1, 200);
    REQUIRE(n0.has_value());
    CHECK(*n0 >= 2);
    CHECK(*n0 <= 60);

    // Too-tight eps over a short range: no index.
    const auto none = stabilization_index(fam, kPsiHalf, 1e-12, 1, 5);
    CHECK_FALSE(none.has_value());

    // An eigenvalue modulus below 1 makes the limit point ill-defined here.
    const auto contracting = MatrixFamily::power(mat2(2, 1, 1, 1));
    CHECK_THROWS_AS(
        accumulation_set(contracting, kPsiHalf, AccumulationMode::Analytic, 1, 1),
        Error);
}

TEST_CASE("huge entries stay accurate through the exact Gram eigensolve") {
    // [[2,1],[1,1]]^n has singular values phi^{2n} and phi^{-2n}; at n = 50
    // the Gram matrix spans ~84 orders of magnitude, far beyond double
    // precision but inside the high-precision pipeline's range.
    const auto fam = MatrixFamily::power(mat2(2, 1, 1, 1));
    const long n = 50;
    const auto prof = spectral_profile(fam, kPsiHalf, n);
    const double lphi2 = 2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(prof.l[1] == doctest::Approx(lphi2).epsilon(1e-3));
    CHECK(prof.l[0] == doctest::Approx(-lphi2).epsilon(1e-3));
    // Exact determinant identity: l_1 + l_2 = (1/n) ln|det A^n| = 0.
    CHECK(prof.l[0] + prof.l[1] == doctest::Approx(0.0).epsilon(1e-12));
}
