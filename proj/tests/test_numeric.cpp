#include <doctest.h>

#include <cmath>

#include "hdim/errors.hpp"
#include "hdim/numeric.hpp"

using namespace hdim;

TEST_CASE("rational text round trip") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-12") == Rat(-12));
    CHECK(parse_rational("0.25") == Rat(1, 4));
    CHECK(parse_rational("-1.5") == Rat(-3, 2));
    CHECK(format_rational(Rat(3, 4)) == "3/4");
    CHECK(format_rational(Rat(-8, 2)) == "-4");
    CHECK(parse_rational(format_rational(Rat(-355, 113))) == Rat(-355, 113));
    CHECK_THROWS_AS((void)parse_rational("1/0"), Error);
    CHECK_THROWS_AS((void)parse_rational("abc"), Error);
}

TEST_CASE("integer helpers") {
    CHECK(isqrt_floor(BigInt(0)) == 0);
    CHECK(isqrt_floor(BigInt(15)) == 3);
    CHECK(isqrt_floor(BigInt(16)) == 4);
    const BigInt big = ipow(BigInt(10), 40) + 12345;
    const BigInt r = isqrt_floor(big);
    CHECK(r * r <= big);
    CHECK((r + 1) * (r + 1) > big);
    CHECK(ipow(BigInt(3), 5) == 243);
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    CHECK(floor_rat(Rat(-7, 2)) == -4);
    CHECK(ceil_rat(Rat(-7, 2)) == -3);
    CHECK(floor_rat(Rat(6, 3)) == 2);
    CHECK(ceil_rat(Rat(6, 3)) == 2);
}

TEST_CASE("line fit recovers exact collinear data") {
    const std::vector<double> xs{1, 2, 3, 4, 5};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.5 * x - 1.25);
    const LineFit fit = fit_line(xs, ys);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-1.25).epsilon(1e-12));
    CHECK(fit.rms_residual < 1e-12);
    CHECK_THROWS_AS((void)fit_line({1.0}, {1.0}), Error);
}

TEST_CASE("tail window start covers the trailing thirty percent") {
    // Window [start, hi] holds ceil(0.3 * count) rows.
    CHECK(tail_window_start(1, 10) == 8);    // 3 of 10
    CHECK(tail_window_start(1, 1) == 1);     // degenerate single row
    CHECK(tail_window_start(20, 60) == 48);  // 13 of 41
    CHECK(tail_window_start(5, 14) == 12);   // 3 of 10
}

TEST_CASE("to_double magnitudes") {
    CHECK(to_double(Rat(1, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Rat tiny = rat_pow(Rat(1, 10), 40);
    CHECK(to_double(tiny) == doctest::Approx(1e-40).epsilon(1e-12));
    CHECK(to_double(BigInt(1) << 80) == doctest::Approx(std::pow(2.0, 80)).epsilon(1e-15));
}
