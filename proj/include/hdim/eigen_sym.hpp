/**
 * eigen_sym.hpp
 *
 * Symmetric eigensolves via cyclic Jacobi rotations, generic over the scalar
 * (double or the 100-digit float), plus singular values through the Gram
 * matrix and eigenvalue moduli of general small matrices through an exact
 * characteristic polynomial and a Durand-Kerner root finder.
 *
 * Jacobi is the right tool at dimension <= 6: quadratically convergent, no
 * deflation bookkeeping, and it instantiates cleanly for any scalar with
 * abs/sqrt.  The matrices whose spectra this project needs have singular
 * values spanning up to ~1e87, which is why the Gram pipeline runs in high
 * precision and only the final logs are handed back as doubles.
 */
#pragma once

#include <complex>
#include <limits>

#include "hdim/matrix.hpp"

namespace hdim {

template <class T>
struct SymEigen {
    Vec<T> values;      // ascending
    Mat<T> vectors;     // columns, same order as values
    double residual;    // max off-diagonal left, relative to the matrix scale
};

template <class T>
SymEigen<T> sym_eigen(Mat<T> s, int max_sweeps = 80) {
    using std::abs;
    using std::sqrt;
    const int n = s.rows();
    Mat<T> v = Mat<T>::identity(n);
    const T eps = std::numeric_limits<T>::epsilon();

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const T apq = s(p, q);
                if (abs(apq) <= eps * (abs(s(p, p)) + abs(s(q, q)))) continue;
                rotated = true;
                const T theta = (s(q, q) - s(p, p)) / (T(2) * apq);
                T t;
                if (theta >= T(0))
                    t = T(1) / (theta + sqrt(theta * theta + T(1)));
                else
                    t = T(-1) / (-theta + sqrt(theta * theta + T(1)));
                const T c = T(1) / sqrt(t * t + T(1));
                const T sn = t * c;
                const T app = s(p, p), aqq = s(q, q);
                s(p, p) = app - t * apq;
                s(q, q) = aqq + t * apq;
                s(p, q) = T(0);
                s(q, p) = T(0);
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const T sip = s(i, p), siq = s(i, q);
                    s(i, p) = c * sip - sn * siq;
                    s(i, q) = sn * sip + c * siq;
                    s(p, i) = s(i, p);
                    s(q, i) = s(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    const T vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        }
        if (!rotated) break;
    }

    double scale = 0.0, off = 0.0;
    for (int i = 0; i < n; ++i) {
        scale = std::max(scale, to_double(abs(s(i, i))));
        for (int j = i + 1; j < n; ++j) off = std::max(off, to_double(abs(s(i, j))));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s(a, a) < s(b, b); });

    SymEigen<T> out;
    out.values.resize(n);
    out.vectors = Mat<T>(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = s(order[k], order[k]);
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    out.residual = scale > 0.0 ? off / scale : off;
    return out;
}

// ─────────────────────────────────────────────────────────────────────────────
// Singular values
// ─────────────────────────────────────────────────────────────────────────────

template <class T>
struct SingularValues {
    Vec<T> sigma;     // ascending
    double residual;  // Jacobi off-diagonal residual, relative
};

/// Singular values through the Gram matrix, with two verifications baked in:
/// the eigensolve residual must reach 1e-10 of the Gram scale, and the product
/// of the singular values must match |det| to a 1e-8 relative error.
template <class T>
SingularValues<T> singular_values(const Mat<T>& m) {
    using std::abs;
    using std::sqrt;
    const int n = m.rows();
    const Mat<T> g = gram(m);
    SymEigen<T> eig = sym_eigen(g);
    if (eig.residual > 1e-10)
        fail(ErrorCode::NumericalFailure, "Gram eigensolve residual above 1e-10");

    SingularValues<T> out;
    out.residual = eig.residual;
    out.sigma.resize(n);
    const double gscale = std::max(max_abs(g), 1.0);
    for (int i = 0; i < n; ++i) {
        T lam = eig.values[i];
        if (lam < T(0)) {
            if (to_double(abs(lam)) > 1e-10 * gscale)
                fail(ErrorCode::NumericalFailure, "negative Gram eigenvalue beyond tolerance");
            lam = T(0);
        }
        out.sigma[i] = sqrt(lam);
    }

    T prod(1);
    for (const T& s : out.sigma) prod *= s;
    const T dm = abs(det(m));
    if (dm == T(0)) {
        if (to_double(prod) > 1e-8)
            fail(ErrorCode::NumericalFailure, "singular matrix with nonzero sigma product");
    } else {
        const double rel = to_double(abs(prod - dm) / dm);
        if (rel > 1e-8)
            fail(ErrorCode::NumericalFailure, "sigma product disagrees with |det|");
    }
    return out;
}

// ─────────────────────────────────────────────────────────────────────────────
// Eigenvalue moduli of a general real matrix (exact char poly + root finder)
// ─────────────────────────────────────────────────────────────────────────────

/// Characteristic polynomial of an exact rational matrix via the
/// Faddeev-LeVerrier recurrence.  Returned monic, c[k] multiplying x^k.
inline Vec<Rat> char_poly(const Mat<Rat>& a) {
    const int n = a.rows();
    Vec<Rat> c(n + 1, Rat(0));
    c[n] = 1;
    Mat<Rat> mk = Mat<Rat>::identity(n);
    for (int k = 1; k <= n; ++k) {
        mk = a * mk;
        Rat tr(0);
        for (int i = 0; i < n; ++i) tr += mk(i, i);
        c[n - k] = -tr / k;
        for (int i = 0; i < n; ++i) mk(i, i) += c[n - k];
    }
    return c;
}

/// All complex roots of a monic polynomial with real coefficients
/// (Durand-Kerner; degree <= 6 in this project).
inline std::vector<std::complex<double>> poly_roots(const Vec<Rat>& coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    std::vector<std::complex<double>> c(deg + 1);
    for (int i = 0; i <= deg; ++i) c[i] = to_double(coeffs[i]);

    double radius = 1.0;
    for (int i = 0; i < deg; ++i)
        radius = std::max(radius, 2.0 * std::pow(std::abs(c[i]), 1.0 / (deg - i)));

    std::vector<std::complex<double>> z(deg);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> w(1.0, 0.0);
    for (int k = 0; k < deg; ++k) { w *= seed; z[k] = radius * w / std::abs(w); }

    auto eval = [&](std::complex<double> x) {
        std::complex<double> p = c[deg];
        for (int i = deg - 1; i >= 0; --i) p = p * x + c[i];
        return p;
    };

    for (int iter = 0; iter < 600; ++iter) {
        double worst = 0.0;
        for (int k = 0; k < deg; ++k) {
            std::complex<double> d(1.0, 0.0);
            for (int j = 0; j < deg; ++j)
                if (j != k) d *= (z[k] - z[j]);
            const std::complex<double> delta = eval(z[k]) / d;
            z[k] -= delta;
            worst = std::max(worst, std::abs(delta) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

/// Ascending eigenvalue moduli of an exact rational matrix.
inline std::vector<double> eigenvalue_moduli(const Mat<Rat>& a) {
    std::vector<std::complex<double>> roots = poly_roots(char_poly(a));
    std::vector<double> mods(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) mods[i] = std::abs(roots[i]);
    std::sort(mods.begin(), mods.end());
    return mods;
}

}  // namespace hdim
