/**
 * numeric.hpp
 *
 * Scalar foundations: exact integers and rationals, a high-precision binary
 * float for eigensolves whose dynamic range destroys doubles, conversions,
 * rational parsing/formatting, integer square roots, and the small statistics
 * helpers (least-squares line fits, tail windows) shared by the estimator
 * modules.
 *
 * The high-precision float carries 100 decimal digits: matrix powers used by
 * the profile pipeline reach singular-value spreads of 1e87 before squaring,
 * and the Gram matrix squares that spread.  100 digits leaves the small
 * eigenvalues with comfortably more than 10 accurate digits.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hdim/errors.hpp"

namespace hdim {

using BigInt   = boost::multiprecision::cpp_int;
using Rat      = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;

// ─────────────────────────────────────────────────────────────────────────────
// Conversions
// ─────────────────────────────────────────────────────────────────────────────

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.convert_to<double>(); }
inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline BigFloat to_bigfloat(const Rat& q) { return BigFloat(q); }
inline BigFloat to_bigfloat(double x) { return BigFloat(x); }

inline BigInt numer(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rat& q) { return boost::multiprecision::denominator(q); }

/// Natural log of a positive rational, evaluated in high precision and
/// rounded once to double.
inline double log_rat(const Rat& q) {
    if (q <= 0) fail(ErrorCode::NumericalFailure, "log of non-positive rational");
    return to_double(boost::multiprecision::log(BigFloat(q)));
}

/// Exact conversion of a double to a rational (every finite double is one).
inline Rat rat_of_double(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::NumericalFailure, "non-finite value");
    return Rat(x);
}

// ─────────────────────────────────────────────────────────────────────────────
// Integer helpers
// ─────────────────────────────────────────────────────────────────────────────

/// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt_floor(const BigInt& n) {
    if (n < 0) fail(ErrorCode::NumericalFailure, "isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline BigInt floor_rat(const Rat& q) {
    BigInt n = numer(q), d = denom(q);
    BigInt quo = n / d;
    if (n % d != 0 && n < 0) --quo;
    return quo;
}

inline BigInt ceil_rat(const Rat& q) {
    BigInt n = numer(q), d = denom(q);
    BigInt quo = n / d;
    if (n % d != 0 && n > 0) ++quo;
    return quo;
}

/// Integer power (exponent >= 0).
inline BigInt ipow(BigInt base, unsigned long e) {
    BigInt r = 1;
    while (e) {
        if (e & 1UL) r *= base;
        e >>= 1UL;
        if (e) base *= base;
    }
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e >= 0) return Rat(ipow(numer(base), static_cast<unsigned long>(e)),
                           ipow(denom(base), static_cast<unsigned long>(e)));
    if (base == 0) fail(ErrorCode::SingularMatrix, "zero to negative power");
    return Rat(ipow(denom(base), static_cast<unsigned long>(-e)),
               ipow(numer(base), static_cast<unsigned long>(-e)));
}

// ─────────────────────────────────────────────────────────────────────────────
// Rational text I/O ("p/q", integers, plain decimals, optional exponent)
// ─────────────────────────────────────────────────────────────────────────────

namespace detail {

/// Decimal integer text -> BigInt.  Accumulating digits ourselves keeps a
/// leading zero from being read as an octal prefix and turns any stray
/// character into a typed error instead of a library exception.
inline BigInt parse_integer_text(const std::string& s, const std::string& whole) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    if (i == s.size()) fail(ErrorCode::InvalidConfig, "malformed rational '" + whole + "'");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            fail(ErrorCode::InvalidConfig, "malformed rational '" + whole + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}

}  // namespace detail

inline Rat parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) fail(ErrorCode::InvalidConfig, "empty rational literal");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        const std::string ntxt = s.substr(0, slash), dtxt = s.substr(slash + 1);
        if (ntxt.empty() || dtxt.empty())
            fail(ErrorCode::InvalidConfig, "malformed rational '" + text + "'");
        const BigInt n = detail::parse_integer_text(ntxt, text);
        const BigInt d = detail::parse_integer_text(dtxt, text);
        if (d == 0) fail(ErrorCode::InvalidConfig, "zero denominator in '" + text + "'");
        return Rat(n, d);
    }

    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string::npos) {
        const BigInt e = detail::parse_integer_text(s.substr(epos + 1), text);
        if (e > 9999 || e < -9999)
            fail(ErrorCode::InvalidConfig, "exponent out of range in '" + text + "'");
        exp10 = static_cast<long>(e);
        s = s.substr(0, epos);
    }
    BigInt scale = 1;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        const std::string frac = s.substr(dot + 1);
        s = s.substr(0, dot) + frac;
        scale = ipow(10, frac.size());
        if (s == "" || s == "-" || s == "+") s += "0";
    }
    Rat r(detail::parse_integer_text(s, text), scale);
    if (exp10 > 0) r *= Rat(ipow(10, static_cast<unsigned long>(exp10)));
    if (exp10 < 0) r /= Rat(ipow(10, static_cast<unsigned long>(-exp10)));
    return r;
}

inline std::string format_rational(const Rat& q) {
    const BigInt n = numer(q), d = denom(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

// ─────────────────────────────────────────────────────────────────────────────
// Fitting and window helpers
// ─────────────────────────────────────────────────────────────────────────────

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        fail(ErrorCode::InsufficientResolution, "line fit needs at least two points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) fail(ErrorCode::InsufficientResolution, "degenerate abscissae in line fit");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

/// First index n in [lo, hi] belonging to the tail window (last ceil(30%)).
inline long tail_window_start(long lo, long hi) {
    const long count = hi - lo + 1;
    const long tail = (3 * count + 9) / 10;  // ceil(0.3 * count)
    return hi - tail + 1;
}

}  // namespace hdim
