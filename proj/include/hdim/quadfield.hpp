/**
 * quadfield.hpp
 *
 * Exact arithmetic in a real quadratic extension: values a + b*sqrt(D) with
 * rational a, b and a fixed nonnegative integer radicand D.  Signs and
 * comparisons are decided exactly (compare a^2 against b^2 D), which is what
 * the gap-separation analysis needs: it must certify that certain algebraic
 * numbers stay a definite distance away from rationals, and floating point
 * cannot certify anything there.
 *
 * Also hosts the exact eigen decomposition of symmetric integer 2x2 matrices,
 * whose eigenvalues and eigenvector slopes live in exactly such a field.
 */
#pragma once

#include "hdim/numeric.hpp"

namespace hdim {

struct QuadExt {
    Rat a{0};      // rational part
    Rat b{0};      // coefficient of sqrt(D)
    BigInt d{0};   // radicand, >= 0, shared by all operands of an expression

    QuadExt() = default;
    QuadExt(Rat a_, Rat b_, BigInt d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {}
    static QuadExt rational(Rat r, BigInt d_) { return QuadExt(std::move(r), Rat(0), std::move(d_)); }

    QuadExt conj() const { return QuadExt(a, -b, d); }

    QuadExt operator+(const QuadExt& o) const { return QuadExt(a + o.a, b + o.b, d); }
    QuadExt operator-(const QuadExt& o) const { return QuadExt(a - o.a, b - o.b, d); }
    QuadExt operator-() const { return QuadExt(-a, -b, d); }

    QuadExt operator*(const QuadExt& o) const {
        return QuadExt(a * o.a + b * o.b * Rat(d), a * o.b + b * o.a, d);
    }

    QuadExt operator*(const Rat& r) const { return QuadExt(a * r, b * r, d); }

    QuadExt operator/(const QuadExt& o) const {
        // multiply by the conjugate; the field norm a^2 - b^2 D is rational
        const Rat nrm = o.a * o.a - o.b * o.b * Rat(o.d);
        if (nrm == 0) fail(ErrorCode::NumericalFailure, "division by zero in quadratic field");
        const QuadExt num = (*this) * o.conj();
        return QuadExt(num.a / nrm, num.b / nrm, d);
    }

    bool is_zero() const { return a == 0 && b == 0; }

    /// Exact sign of a + b*sqrt(D).
    int sign() const {
        const int sa = a == 0 ? 0 : (a > 0 ? 1 : -1);
        if (b == 0 || d == 0) return sa;
        const int sb = b > 0 ? 1 : -1;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: |a| vs |b| sqrt(D) decides
        const Rat lhs = a * a, rhs = b * b * Rat(d);
        if (lhs == rhs) return 0;
        return lhs > rhs ? sa : sb;
    }

    bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
    bool operator>(const QuadExt& o) const { return (*this - o).sign() > 0; }
    bool operator==(const QuadExt& o) const { return (*this - o).is_zero(); }

    double to_double_approx() const {
        BigFloat v = to_bigfloat(a) + to_bigfloat(b) * boost::multiprecision::sqrt(BigFloat(d));
        return to_double(v);
    }
};

inline QuadExt abs(const QuadExt& x) { return x.sign() >= 0 ? x : -x; }

// ─────────────────────────────────────────────────────────────────────────────
// Symmetric integer 2x2 spectral data
// ─────────────────────────────────────────────────────────────────────────────

struct SymmetricEigen2 {
    BigInt disc;        // (p-r)^2 + 4 q^2, the shared radicand
    QuadExt lambda_min; // both eigenvalues, exactly
    QuadExt lambda_max;
    QuadExt slope_max;  // eigenvector slope y/x for lambda_max (requires q != 0)
    QuadExt slope_min;
};

/// Exact eigen decomposition of [[p, q], [q, r]] with integer entries.
inline SymmetricEigen2 symmetric_eigen_2x2(const BigInt& p, const BigInt& q, const BigInt& r) {
    SymmetricEigen2 out;
    out.disc = (p - r) * (p - r) + 4 * q * q;
    const Rat half(1, 2);
    const Rat tr = Rat(p + r);
    out.lambda_max = QuadExt(tr * half, half, out.disc);
    out.lambda_min = QuadExt(tr * half, -half, out.disc);
    if (q != 0) {
        // eigenvector for lambda: (q, lambda - p), slope = (lambda - p)/q
        const Rat invq = Rat(1) / Rat(q);
        out.slope_max = (out.lambda_max - QuadExt::rational(Rat(p), out.disc)) * invq;
        out.slope_min = (out.lambda_min - QuadExt::rational(Rat(p), out.disc)) * invq;
    }
    return out;
}

}  // namespace hdim
