/**
 * matrix.hpp
 *
 * Small dense matrices over an arbitrary scalar (double, high-precision
 * float, exact rational).  Everything here is sized for dimensions <= 6, so
 * the algorithms favour exactness and clarity over asymptotics: Gaussian
 * elimination for determinants and inverses, repeated squaring for powers,
 * textbook column Hermite normal form for integer matrices.
 *
 * The generic scalar support is the reason this type exists at all: the
 * pipeline needs exact rational matrix powers and inverses side by side with
 * high-precision floating eigensolves, and mixing those scalars through a
 * general-purpose linear-algebra library proved brittle (see the test oracle,
 * which cross-checks the double instantiation against one).
 */
#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "hdim/numeric.hpp"

namespace hdim {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const {
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& aik = (*this)(i, k);
                if (aik == T(0)) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Vec<T> operator*(const Vec<T>& v) const {
        Vec<T> r(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat operator*(const T& s) const {
        Mat r = *this;
        for (auto& x : r.a_) x *= s;
        return r;
    }

    Mat operator-(const Mat& o) const {
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }

    Vec<T> column(int j) const {
        Vec<T> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_column(int j, const Vec<T>& c) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

private:
    int rows_, cols_;
    std::vector<T> a_;
};

// ─────────────────────────────────────────────────────────────────────────────
// Scalar-generic helpers
// ─────────────────────────────────────────────────────────────────────────────

namespace detail {

template <class T>
double pivot_weight(const T& x) {
    using std::abs;
    if constexpr (std::is_same_v<T, Rat>) {
        return x == T(0) ? 0.0 : 1.0;  // any nonzero pivot is exact
    } else {
        return to_double(abs(x));
    }
}

}  // namespace detail

template <class To, class From>
Mat<To> mat_cast(const Mat<From>& m) {
    Mat<To> r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if constexpr (std::is_same_v<To, double>) {
                r(i, j) = to_double(m(i, j));
            } else if constexpr (std::is_same_v<From, double> && std::is_same_v<To, Rat>) {
                r(i, j) = rat_of_double(m(i, j));
            } else {
                r(i, j) = To(m(i, j));
            }
        }
    return r;
}

template <class T>
Mat<T> mat_pow(Mat<T> base, unsigned long e) {
    Mat<T> r = Mat<T>::identity(base.rows());
    while (e) {
        if (e & 1UL) r = r * base;
        e >>= 1UL;
        if (e) base = base * base;
    }
    return r;
}

template <class T>
T det(Mat<T> m) {
    const int n = m.rows();
    T d(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        double best = 0.0;
        for (int r = c; r < n; ++r) {
            const double w = detail::pivot_weight(m(r, c));
            if (w > best) { best = w; piv = r; }
        }
        if (piv < 0) return T(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (m(r, c) == T(0)) continue;
            const T f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

template <class T>
Mat<T> inverse(Mat<T> m) {
    const int n = m.rows();
    Mat<T> inv = Mat<T>::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        double best = 0.0;
        for (int r = c; r < n; ++r) {
            const double w = detail::pivot_weight(m(r, c));
            if (w > best) { best = w; piv = r; }
        }
        if (piv < 0) fail(ErrorCode::SingularMatrix, "matrix has no inverse");
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        const T p = m(c, c);
        for (int j = 0; j < n; ++j) { m(c, j) /= p; inv(c, j) /= p; }
        for (int r = 0; r < n; ++r) {
            if (r == c || m(r, c) == T(0)) continue;
            const T f = m(r, c);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
T norm_sq(const Vec<T>& v) {
    return dot(v, v);
}

template <class T>
Mat<T> gram(const Mat<T>& basis) {
    return basis.transpose() * basis;
}

template <class T>
double max_abs(const Mat<T>& m) {
    using std::abs;
    double best = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) best = std::max(best, to_double(abs(m(i, j))));
    return best;
}

// ─────────────────────────────────────────────────────────────────────────────
// Block structure
// ─────────────────────────────────────────────────────────────────────────────

/// Connected components of the symmetrised nonzero pattern.  A basis matrix
/// supported on disjoint coordinate sets generates an orthogonal direct sum,
/// which downstream lattice code exploits.
template <class T>
std::vector<std::vector<int>> block_components(const Mat<T>& m) {
    const int n = m.rows();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (m(i, j) != T(0) || m(j, i) != T(0))) unite(i, j);
    std::vector<std::vector<int>> comps(n);
    for (int i = 0; i < n; ++i) comps[find(i)].push_back(i);
    comps.erase(std::remove_if(comps.begin(), comps.end(),
                               [](const std::vector<int>& c) { return c.empty(); }),
                comps.end());
    return comps;
}

template <class T>
Mat<T> submatrix(const Mat<T>& m, const std::vector<int>& idx) {
    Mat<T> s(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            s(static_cast<int>(i), static_cast<int>(j)) = m(idx[i], idx[j]);
    return s;
}

// ─────────────────────────────────────────────────────────────────────────────
// Column Hermite normal form (integer matrices)
// ─────────────────────────────────────────────────────────────────────────────

/// Returns H lower-triangular with positive diagonal and reduced off-diagonal
/// entries, such that H = A*U for some unimodular U.  The columns of H span
/// the same lattice as the columns of A; the diagonal product is |det A|.
inline Mat<BigInt> hnf_column(Mat<BigInt> h) {
    const int n = h.rows();
    for (int i = 0; i < n; ++i) {
        // Clear row i to the right of the diagonal with column gcd steps.
        for (;;) {
            int nz = -1;
            for (int j = i + 1; j < n; ++j)
                if (h(i, j) != 0) { nz = j; break; }
            if (nz < 0) break;
            if (h(i, i) == 0) {
                for (int r = 0; r < n; ++r) std::swap(h(r, i), h(r, nz));
                continue;
            }
            const BigInt q = h(i, nz) / h(i, i);
            for (int r = 0; r < n; ++r) h(r, nz) -= q * h(r, i);
            if (h(i, nz) != 0)
                for (int r = 0; r < n; ++r) std::swap(h(r, i), h(r, nz));
        }
        if (h(i, i) == 0)
            fail(ErrorCode::SingularMatrix, "Hermite form of a singular matrix");
        if (h(i, i) < 0)
            for (int r = 0; r < n; ++r) h(r, i) = -h(r, i);
        // Reduce the entries of row i in earlier columns into [0, h(i,i)).
        for (int j = 0; j < i; ++j) {
            BigInt q = h(i, j) / h(i, i);
            if (h(i, j) % h(i, i) < 0) --q;
            if (q != 0)
                for (int r = 0; r < n; ++r) h(r, j) -= q * h(r, i);
        }
    }
    return h;
}

}  // namespace hdim
