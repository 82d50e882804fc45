/**
 * empirical.cpp
 *
 * Preimage enumeration, membership, depth-matched box counting, fiber
 * structure, the quadratic-irrational gap certificate, and covering counts.
 *
 * Counting decisions run on exact integers and rationals; doubles carry only
 * reported magnitudes, fitted slopes, and the geometry of cell marking.
 */
#include "hdim/empirical.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "hdim/dimension.hpp"
#include "hdim/eigen_sym.hpp"
#include "hdim/quadfield.hpp"
#include "hdim/spectra.hpp"

namespace hdim {

namespace {

constexpr long long kMaterializeCap = 200'000;   // largest point list kept in memory
constexpr long long kGeneralPathCap = 2'000'000; // ball-enumeration safety cap

void check_stage(const MatrixFamily& fam, long n) {
    if (n < 1 || n > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "family has no matrix at n=" + std::to_string(n));
}

void check_unit_box(const Vec<Rat>& y, int d, const std::string& what) {
    if (static_cast<int>(y.size()) != d)
        fail(ErrorCode::InvalidConfig, what + " dimension disagrees with the family");
    for (const Rat& c : y)
        if (c < 0 || c >= 1) fail(ErrorCode::InvalidConfig, what + " must lie in [0,1)^d");
}

bool is_integer_mat(const Mat<Rat>& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (denom(m(i, j)) != 1) return false;
    return true;
}

double ln_bigint(const BigInt& v) {
    return to_double(boost::multiprecision::log(BigFloat(v)));
}

// Integer k with (off + k) / den in [0,1), exactly.  den > 0 gives
// k in [ceil(-off), ceil(den - off) - 1]; den < 0 flips the inequalities.
struct AxisRange {
    BigInt lo, hi;  // empty when hi < lo
};

AxisRange axis_range(const Rat& den, const Rat& off) {
    if (den > 0) return {ceil_rat(-off), ceil_rat(den - off) - 1};
    return {floor_rat(den - off) + 1, floor_rat(-off)};
}

std::vector<Vec<Rat>> cartesian_points(const std::vector<std::vector<Rat>>& axes) {
    std::vector<Vec<Rat>> pts;
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    pts.reserve(total);
    Vec<Rat> cur(axes.size(), Rat(0));
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == axes.size()) {
            pts.push_back(cur);
            return;
        }
        for (const Rat& v : axes[j]) {
            cur[j] = v;
            self(self, j + 1);
        }
    };
    rec(rec, 0);
    return pts;
}

// ─────────────────────────────────────────────────────────────────────────────
// Center grids: per-coordinate product structure of F_n(y) where it exists
// ─────────────────────────────────────────────────────────────────────────────

struct CenterGrid {
    bool grid = false;      // the preimages form a per-coordinate product
    bool feasible = false;  // the sweep fits the iteration cap
    double total = 0.0;     // number of centers
    std::vector<std::vector<double>> axes;  // ascending per-coordinate values
};

CenterGrid center_grid(const MatrixFamily& fam, long n, const Vec<Rat>& y, double iter_cap,
                       double axis_cap) {
    CenterGrid out;
    const int d = fam.d;
    if (fam.kind == FamilyKind::Diagonal) {
        out.grid = true;
        const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
        if (fam.diag_log_scale) {
            std::vector<double> counts(static_cast<std::size_t>(d));
            out.total = 1.0;
            for (int j = 0; j < d; ++j) {
                const double e = std::exp(to_double(row[static_cast<std::size_t>(j)]));
                counts[static_cast<std::size_t>(j)] =
                    std::max(0.0, std::ceil(e - to_double(y[static_cast<std::size_t>(j)])));
                out.total *= counts[static_cast<std::size_t>(j)];
            }
            for (double c : counts)
                if (c > axis_cap) return out;
            if (out.total > iter_cap) return out;
            out.feasible = true;
            for (int j = 0; j < d; ++j) {
                const double e = std::exp(to_double(row[static_cast<std::size_t>(j)]));
                const double yd = to_double(y[static_cast<std::size_t>(j)]);
                std::vector<double> vals;
                vals.reserve(static_cast<std::size_t>(counts[static_cast<std::size_t>(j)]));
                for (double k = 0; k < counts[static_cast<std::size_t>(j)]; ++k)
                    vals.push_back((yd + k) / e);
                out.axes.push_back(std::move(vals));
            }
            return out;
        }
        std::vector<AxisRange> ranges;
        out.total = 1.0;
        for (int j = 0; j < d; ++j) {
            ranges.push_back(axis_range(row[static_cast<std::size_t>(j)],
                                        y[static_cast<std::size_t>(j)]));
            const AxisRange& r = ranges.back();
            out.total *= r.hi < r.lo ? 0.0 : to_double(BigInt(r.hi - r.lo + 1));
        }
        if (out.total > iter_cap) return out;
        for (const AxisRange& r : ranges)
            if (!(r.hi < r.lo) && to_double(BigInt(r.hi - r.lo + 1)) > axis_cap) return out;
        out.feasible = true;
        for (int j = 0; j < d; ++j) {
            const double e = to_double(row[static_cast<std::size_t>(j)]);
            const double yd = to_double(y[static_cast<std::size_t>(j)]);
            std::vector<double> vals;
            for (BigInt k = ranges[static_cast<std::size_t>(j)].lo;
                 k <= ranges[static_cast<std::size_t>(j)].hi; ++k)
                vals.push_back((yd + to_double(k)) / e);
            std::sort(vals.begin(), vals.end());
            out.axes.push_back(std::move(vals));
        }
        return out;
    }
    if (fam.kind == FamilyKind::ScaledPower && is_integer_mat(fam.base)) {
        out.grid = true;
        const BigInt lb = ipow(fam.scale, static_cast<unsigned long>(n));
        const double ld = to_double(lb);
        out.total = std::pow(ld, d);
        if (out.total > iter_cap || ld > axis_cap) return out;
        out.feasible = true;
        const Mat<Rat> an_inv = inverse(generate_matrix_exact(fam, n));
        const Vec<Rat> o = an_inv * y;
        for (int j = 0; j < d; ++j) {
            const Rat scaled = o[static_cast<std::size_t>(j)] * Rat(lb);
            const double r0 = to_double(scaled - Rat(floor_rat(scaled)));
            std::vector<double> vals;
            vals.reserve(static_cast<std::size_t>(ld));
            for (double k = 0; k < ld; ++k) vals.push_back((r0 + k) / ld);
            out.axes.push_back(std::move(vals));
        }
        return out;
    }
    return out;  // general kinds need the exact enumeration path
}

template <class F>
void sweep_centers(const CenterGrid& g, const std::vector<std::array<double, 3>>& pts, int d,
                   F&& body) {
    if (!g.grid) {
        for (const auto& c : pts) body(c);
        return;
    }
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (double v0 : g.axes[0]) {
        c[0] = v0;
        if (d == 1) {
            body(c);
            continue;
        }
        for (double v1 : g.axes[1]) {
            c[1] = v1;
            if (d == 2) {
                body(c);
                continue;
            }
            for (double v2 : g.axes[2]) {
                c[2] = v2;
                body(c);
            }
        }
    }
}

}  // namespace

// ─────────────────────────────────────────────────────────────────────────────
// Preimage sets
// ─────────────────────────────────────────────────────────────────────────────

PreimageSet enumerate_preimages(const MatrixFamily& fam, long n, const Vec<Rat>& y,
                                long long budget) {
    validate_family(fam);
    check_stage(fam, n);
    check_unit_box(y, fam.d, "target");
    if (budget < 1) fail(ErrorCode::InvalidConfig, "budget must be positive");
    const int d = fam.d;

    PreimageSet out;
    out.n = n;
    out.y = y;

    // Per-coordinate closed forms: x_j = (k + off_j) / den_j over an exact
    // integer range of k.
    std::vector<AxisRange> ranges;
    std::vector<Rat> axis_den, axis_off;
    if (fam.kind == FamilyKind::Diagonal) {
        if (fam.diag_log_scale)
            fail(ErrorCode::NumericalFailure,
                 "log-scale diagonal stages have irrational entries; preimages are not exact");
        const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
        for (int j = 0; j < d; ++j) {
            ranges.push_back(axis_range(row[static_cast<std::size_t>(j)],
                                        y[static_cast<std::size_t>(j)]));
            axis_den.push_back(row[static_cast<std::size_t>(j)]);
            axis_off.push_back(y[static_cast<std::size_t>(j)]);
        }
    } else if (fam.kind == FamilyKind::ScaledPower && is_integer_mat(fam.base)) {
        // A_n^{-1} Z^d = lambda^{-n} Z^d, so each coordinate walks a 1/lambda^n grid.
        const Rat lb = Rat(ipow(fam.scale, static_cast<unsigned long>(n)));
        const Mat<Rat> an_inv = inverse(generate_matrix_exact(fam, n));
        const Vec<Rat> o = an_inv * y;
        for (int j = 0; j < d; ++j) {
            const Rat off = o[static_cast<std::size_t>(j)] * lb;
            ranges.push_back(axis_range(lb, off));
            axis_den.push_back(lb);
            axis_off.push_back(off);
        }
    }

    if (!ranges.empty()) {
        BigInt count(1);
        for (const AxisRange& r : ranges) {
            if (r.hi < r.lo) {
                count = 0;
                break;
            }
            count *= r.hi - r.lo + 1;
        }
        if (count > budget)
            fail(ErrorCode::BudgetExceeded,
                 "preimage count " + count.str() + " exceeds the budget");
        out.count = count;
        const Rat dt = det(generate_matrix_exact(fam, n));
        if (denom(dt) == 1) out.exact_count = abs(numer(dt));
        if (count <= kMaterializeCap) {
            std::vector<std::vector<Rat>> axes(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) {
                for (BigInt k = ranges[static_cast<std::size_t>(j)].lo;
                     k <= ranges[static_cast<std::size_t>(j)].hi; ++k)
                    axes[static_cast<std::size_t>(j)].push_back(
                        (Rat(k) + axis_off[static_cast<std::size_t>(j)]) /
                        axis_den[static_cast<std::size_t>(j)]);
                std::sort(axes[static_cast<std::size_t>(j)].begin(),
                          axes[static_cast<std::size_t>(j)].end());
            }
            out.points = cartesian_points(axes);
            out.materialized = true;
        }
        return out;
    }

    const Mat<Rat> an = generate_matrix_exact(fam, n);

    // Integer stage matrix: A_n^{-1} Z^d contains Z^d, so a lower-triangular
    // basis of it has diagonal 1/a_1, ..., 1/a_d with integer a_j.  The count
    // is the product of the a_j, obtained by column reduction rather than
    // from the determinant, and the fundamental domain streams in nested
    // index loops when materialization is wanted.
    if (is_integer_mat(an)) {
        const BigInt cap = abs(numer(det(an)));
        if (cap == 0) fail(ErrorCode::SingularMatrix, "stage matrix is singular");
        // V = D A_n^{-1} is integer with D = |det A_n|.
        const Mat<Rat> inv = inverse(an);
        Mat<BigInt> h(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Rat e = inv(i, j) * Rat(cap);
                if (denom(e) != 1)
                    fail(ErrorCode::NumericalFailure, "adjugate scaling left a denominator");
                h(i, j) = numer(e);
            }
        // Column-style triangularization by the Euclidean algorithm.
        for (int r = 0; r < d; ++r) {
            for (int j = r + 1; j < d; ++j) {
                while (h(r, j) != 0) {
                    const BigInt q = h(r, r) / h(r, j);
                    for (int i = 0; i < d; ++i) h(i, r) -= q * h(i, j);
                    for (int i = 0; i < d; ++i) std::swap(h(i, r), h(i, j));
                }
            }
            if (h(r, r) < 0)
                for (int i = 0; i < d; ++i) h(i, r) = -h(i, r);
            if (h(r, r) == 0) fail(ErrorCode::SingularMatrix, "triangular basis degenerated");
        }
        BigInt count(1);
        std::vector<BigInt> a_diag;
        for (int j = 0; j < d; ++j) {
            if (cap % h(j, j) != 0)
                fail(ErrorCode::NumericalFailure,
                     "triangular basis does not refine the integer lattice");
            a_diag.push_back(cap / h(j, j));
            count *= a_diag.back();
        }
        if (count > budget)
            fail(ErrorCode::BudgetExceeded, "preimage count " + count.str() + " exceeds the budget");
        out.count = count;
        out.exact_count = cap;
        if (count <= kMaterializeCap) {
            const Vec<Rat> o = inv * y;
            std::vector<BigInt> idx(static_cast<std::size_t>(d), BigInt(0));
            const auto emit_level = [&](const auto& self, int level) -> void {
                if (level == d) {
                    Vec<Rat> p(static_cast<std::size_t>(d));
                    for (int i = 0; i < d; ++i) {
                        Rat c = o[static_cast<std::size_t>(i)];
                        for (int j = 0; j <= i && j < d; ++j)
                            c += Rat(idx[static_cast<std::size_t>(j)] * h(i, j), cap);
                        p[static_cast<std::size_t>(i)] = c - Rat(floor_rat(c));
                    }
                    out.points.push_back(std::move(p));
                    return;
                }
                for (BigInt i = 0; i < a_diag[static_cast<std::size_t>(level)]; ++i) {
                    idx[static_cast<std::size_t>(level)] = i;
                    self(self, level + 1);
                }
            };
            emit_level(emit_level, 0);
            std::sort(out.points.begin(), out.points.end());
            out.materialized = true;
        }
        return out;
    }

    // Remaining exact kinds: x = A_n^{-1}(y + m) for integer m, with x
    // confined to the ball circumscribing [0,1)^d and then filtered exactly.
    const Rat dt = det(an);
    const Rat abs_det = abs(dt);
    if (abs_det > Rat(budget))
        fail(ErrorCode::BudgetExceeded, "expected preimage count exceeds the budget");
    if (abs_det > Rat(kGeneralPathCap))
        fail(ErrorCode::BudgetExceeded, "general-path preimage enumeration is capped at 2e6");
    if (denom(dt) == 1) out.exact_count = abs(numer(dt));

    const Mat<Rat> basis = inverse(an);
    const Vec<Rat> off = basis * y;
    Vec<Rat> target(static_cast<std::size_t>(d), Rat(0));
    for (int j = 0; j < d; ++j) target[static_cast<std::size_t>(j)] = Rat(1, 2) - off[static_cast<std::size_t>(j)];
    // The ball holds at most ~2.9x the box count in d <= 3; 4x plus slack.
    const long max_points =
        static_cast<long>(std::min(4.0 * to_double(abs_det) + 64.0, 9.0e6));
    const auto coeffs = lattice_points_in_ball(basis, target, Rat(d, 4), max_points);

    for (const Vec<BigInt>& m : coeffs) {
        Vec<Rat> x = off;
        bool inside = true;
        for (int r = 0; r < d; ++r) {
            for (int j = 0; j < d; ++j)
                x[static_cast<std::size_t>(r)] += basis(r, j) * Rat(m[static_cast<std::size_t>(j)]);
            if (x[static_cast<std::size_t>(r)] < 0 || x[static_cast<std::size_t>(r)] >= 1) {
                inside = false;
                break;
            }
        }
        if (inside) out.points.push_back(std::move(x));
    }
    std::sort(out.points.begin(), out.points.end());
    out.count = BigInt(out.points.size());
    out.materialized = true;
    if (static_cast<long long>(out.points.size()) > kMaterializeCap) {
        out.points.clear();
        out.materialized = false;
    }
    return out;
}

bool wn_membership(const Vec<double>& x, const MatrixFamily& fam, const PsiSpec& psi, long n,
                   const Vec<double>& y) {
    validate_family(fam);
    validate_psi(psi);
    check_stage(fam, n);
    const int d = fam.d;
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        fail(ErrorCode::InvalidConfig, "point dimension disagrees with the family");
    const Mat<double> a = generate_matrix(fam, n);
    double ssq = 0.0;
    for (int r = 0; r < d; ++r) {
        double w = -y[static_cast<std::size_t>(r)];
        for (int j = 0; j < d; ++j) w += a(r, j) * x[static_cast<std::size_t>(j)];
        const double fr = w - std::nearbyint(w);
        ssq += fr * fr;
    }
    return std::sqrt(ssq) < psi_value(psi, n);
}

// ─────────────────────────────────────────────────────────────────────────────
// Box counting
// ─────────────────────────────────────────────────────────────────────────────

namespace {

struct StageData {
    long n = 0;
    std::vector<double> l;      // ascending normalized log singular values
    double ln_thin = 0.0;       // ln(psi(n)) - n l_max
    double est_points = 0.0;    // |det A_n| magnitude
    bool ready = false;         // centers and frame built
    bool feasible = true;
    CenterGrid grid;
    std::vector<std::array<double, 3>> pts;
    Mat<double> frame;              // columns: ellipsoid axis directions
    std::vector<double> ln_axes;    // ln of matching semi-axes
};

// Ellipsoid frame of A_n^{-1} B(psi(n)): axis directions and log semi-axes.
void build_frame(const MatrixFamily& fam, const PsiSpec& psi, StageData& st) {
    const int d = fam.d;
    const double lp = log_psi(psi, st.n);
    st.frame = Mat<double>::identity(d);
    st.ln_axes.assign(static_cast<std::size_t>(d), 0.0);
    if (fam.kind == FamilyKind::Diagonal) {
        const auto& row = fam.diag_entries[static_cast<std::size_t>(st.n - 1)];
        for (int j = 0; j < d; ++j) {
            const Rat& e = row[static_cast<std::size_t>(j)];
            const double ln_e = fam.diag_log_scale ? to_double(e)
                                                   : std::log(std::abs(to_double(e)));
            st.ln_axes[static_cast<std::size_t>(j)] = lp - ln_e;
        }
        return;
    }
    if (d == 1) {
        st.ln_axes[0] = lp - static_cast<double>(st.n) * st.l[0];
        return;
    }
    const Mat<Rat> an = generate_matrix_exact(fam, st.n);
    const SymEigen<BigFloat> se = sym_eigen(mat_cast<BigFloat>(gram(an)));
    for (int i = 0; i < d; ++i) {
        st.ln_axes[static_cast<std::size_t>(i)] =
            lp - 0.5 * to_double(boost::multiprecision::log(se.values[static_cast<std::size_t>(i)]));
        for (int j = 0; j < d; ++j)
            st.frame(j, i) = to_double(se.vectors(j, i));
    }
}

// Marks every dyadic cell at depth p that meets the stage ellipsoids, with
// the rho-dilated axis test, and returns the number of marked cells.
long long mark_stage(const StageData& st, int d, int p) {
    const double eps = std::ldexp(1.0, -p);
    const double rho = 0.5 * std::sqrt(static_cast<double>(d)) * eps;
    std::vector<double> ax(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        ax[static_cast<std::size_t>(i)] = std::exp(st.ln_axes[static_cast<std::size_t>(i)]) + rho;
    std::vector<double> bb(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = st.frame(j, i) * ax[static_cast<std::size_t>(i)];
            s += t * t;
        }
        bb[static_cast<std::size_t>(j)] = std::sqrt(s);
    }

    const long long side = 1LL << p;
    const long long cells = d == 1 ? side : side * side;
    std::vector<std::uint64_t> bits(static_cast<std::size_t>((cells + 63) / 64), 0);
    const double scale = static_cast<double>(side);

    // Open intersection with a margin: cells whose center satisfies
    // q(u) < 1 - 1e-9 in the dilated-axis metric.  Boundary touches do not
    // count, and the margin keeps exact-tangency grids (dyadic data)
    // deterministic against last-ulp rounding of the semi-axes.
    constexpr double kQCut = 1.0 - 1e-9;
    auto set_bit = [&](long long ix, long long iy) {
        const long long wx = ((ix % side) + side) % side;
        const long long idx = d == 1 ? wx : wx + (((iy % side) + side) % side) * side;
        bits[static_cast<std::size_t>(idx >> 6)] |= 1ull << (idx & 63);
    };
    auto mark = [&](const std::array<double, 3>& c) {
        const long long xlo = static_cast<long long>(std::floor((c[0] - bb[0]) * scale));
        const long long xhi = static_cast<long long>(std::floor((c[0] + bb[0]) * scale));
        if (d == 1) {
            const double cut = ax[0] * std::sqrt(kQCut);
            for (long long ix = xlo; ix <= xhi; ++ix) {
                const double ux = (static_cast<double>(ix) + 0.5) * eps - c[0];
                if (std::abs(ux) < cut) set_bit(ix, 0);
            }
            return;
        }
        // Tilted strips make the bounding box mostly empty; solve the
        // quadratic q(ux, uy) = kQCut per column for the exact iy interval.
        const double i00 = st.frame(0, 0) / ax[0], i10 = st.frame(1, 0) / ax[0];
        const double i01 = st.frame(0, 1) / ax[1], i11 = st.frame(1, 1) / ax[1];
        const double qa = i10 * i10 + i11 * i11;
        for (long long ix = xlo; ix <= xhi; ++ix) {
            const double ux = (static_cast<double>(ix) + 0.5) * eps - c[0];
            const double qb = 2.0 * (i00 * i10 + i01 * i11) * ux;
            const double qc = (i00 * i00 + i01 * i01) * ux * ux - kQCut;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc <= 0.0) continue;
            const double root = std::sqrt(disc);
            const double uy_lo = (-qb - root) / (2.0 * qa);
            const double uy_hi = (-qb + root) / (2.0 * qa);
            const long long iyl =
                static_cast<long long>(std::ceil((c[1] + uy_lo) * scale - 0.5));
            const long long iyh =
                static_cast<long long>(std::floor((c[1] + uy_hi) * scale - 0.5));
            for (long long iy = iyl; iy <= iyh; ++iy) {
                const double uy = (static_cast<double>(iy) + 0.5) * eps - c[1];
                const double s0 = i00 * ux + i10 * uy;
                const double s1 = i01 * ux + i11 * uy;
                if (s0 * s0 + s1 * s1 < kQCut) set_bit(ix, iy);
            }
        }
    };
    sweep_centers(st.grid, st.pts, d, mark);

    long long count = 0;
    for (std::uint64_t w : bits) count += std::popcount(w);
    return count;
}

}  // namespace

BoxCountEstimate box_count_dimension(const MatrixFamily& fam, const PsiSpec& psi, const Vec<Rat>& y,
                                     long n_lo, long n_hi, int depth_lo, int depth_hi,
                                     long long cell_budget) {
    validate_family(fam);
    validate_psi(psi);
    const int d = fam.d;
    if (d < 1 || d > 2) fail(ErrorCode::InvalidConfig, "box counting is capped at dimension 2");
    check_unit_box(y, d, "target");
    if (n_lo < 1 || n_hi < n_lo || n_hi > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "invalid stage window");
    if (depth_lo < 1 || depth_hi < depth_lo || depth_hi > 30)
        fail(ErrorCode::InvalidConfig, "invalid depth range");
    long double cells_total = 0;
    for (int p = depth_lo; p <= depth_hi; ++p) cells_total += powl(2.0L, p * d);
    if (cells_total > static_cast<long double>(cell_budget))
        fail(ErrorCode::BudgetExceeded, "total dyadic cells across depths exceed the budget");

    constexpr double kGridIterCap = 2.5e6;    // centers swept per marked depth
    constexpr double kGeneralCap = 1.8e5;     // materialized centers for general kinds
    constexpr double kMarkCap = 6.0e7;        // cell tests per marked depth
    const double half_step = 0.5 * std::log(2.0);

    std::vector<StageData> stages;
    for (long n = n_lo; n <= n_hi; ++n) {
        SpectralProfile<double> pr = spectral_profile(fam, psi, n);
        StageData st;
        st.n = n;
        st.l = pr.l;
        st.ln_thin = log_psi(psi, n) - static_cast<double>(n) * pr.l.back();
        double lsum = 0.0;
        for (double li : pr.l) lsum += static_cast<double>(n) * li;
        st.est_points = std::exp(lsum);
        stages.push_back(std::move(st));
    }

    auto ensure_ready = [&](StageData& st) {
        if (st.ready) return;
        st.ready = true;
        st.grid = center_grid(fam, st.n, y, kGridIterCap, 4.0e6);
        if (st.grid.grid) {
            st.feasible = st.grid.feasible;
        } else if (st.est_points > kGeneralCap) {
            st.feasible = false;
        } else {
            const PreimageSet pre = enumerate_preimages(fam, st.n, y, kMaterializeCap);
            if (!pre.materialized) {
                st.feasible = false;
                return;
            }
            st.pts.reserve(pre.points.size());
            for (const Vec<Rat>& pt : pre.points) {
                std::array<double, 3> c{0.0, 0.0, 0.0};
                for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] = to_double(pt[static_cast<std::size_t>(j)]);
                st.pts.push_back(c);
            }
        }
        if (st.feasible) build_frame(fam, psi, st);
    };

    BoxCountEstimate out;
    out.n_lo = n_lo;
    out.n_hi = n_hi;
    for (int p = depth_lo; p <= depth_hi; ++p) {
        const double target_ln = -static_cast<double>(p) * std::log(2.0);
        // The stage whose ellipsoid thickness matches this cell size; stages
        // must match within half a dyadic step or the depth is dropped.
        int best = -1;
        double best_miss = half_step + 1e-9;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            const double miss = std::abs(stages[i].ln_thin - target_ln);
            if (miss >= best_miss) continue;
            ensure_ready(stages[i]);
            if (!stages[i].feasible) continue;
            best = static_cast<int>(i);
            best_miss = miss;
        }
        if (best < 0) continue;
        StageData& st = stages[static_cast<std::size_t>(best)];
        // Marking sweeps columns across the first bounding-box dimension and
        // touches only a handful of cells per column.
        double row = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = st.frame(0, i) * std::exp(st.ln_axes[static_cast<std::size_t>(i)]);
            row += t * t;
        }
        const double per_center =
            (2.0 * std::sqrt(row) * std::ldexp(1.0, p) + 3.0) * (d == 2 ? 8.0 : 1.0);
        const double centers = st.grid.grid ? st.grid.total : static_cast<double>(st.pts.size());
        if (centers * per_center > kMarkCap) continue;

        const long long cnt = mark_stage(st, d, p);
        const double saturation = 0.8 * std::pow(2.0, p * d);
        if (cnt < 32 || static_cast<double>(cnt) > saturation) continue;
        out.depths.push_back(p);
        out.counts.push_back(cnt);
        out.matched_n.push_back(st.n);
    }

    if (out.depths.size() < 2)
        fail(ErrorCode::InsufficientResolution,
             "fewer than two usable depths in the requested window");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < out.depths.size(); ++i) {
        xs.push_back(static_cast<double>(out.depths[i]) * std::log(2.0));
        ys.push_back(std::log(static_cast<double>(out.counts[i])));
    }
    const LineFit fit = fit_line(xs, ys);
    out.slope = fit.slope;
    out.residual = fit.rms_residual;
    return out;
}

// ─────────────────────────────────────────────────────────────────────────────
// Fiber structure
// ─────────────────────────────────────────────────────────────────────────────

FiberStructure fiber_intervals(const BigInt& lambda, const Mat<Rat>& a, const Rat& x, long n,
                               const PsiSpec& psi, long long budget) {
    if (a.rows() != 2 || a.cols() != 2)
        fail(ErrorCode::InvalidCounterexampleFamily, "matrix must be 2x2");
    if (!is_integer_mat(a))
        fail(ErrorCode::InvalidCounterexampleFamily, "matrix entries must be integers");
    if (a(0, 1) != a(1, 0))
        fail(ErrorCode::InvalidCounterexampleFamily, "matrix must be symmetric");
    if (abs(det(a)) != 1)
        fail(ErrorCode::InvalidCounterexampleFamily, "matrix must be unimodular");
    if (lambda < 1)
        fail(ErrorCode::InvalidCounterexampleFamily, "scale must be a positive integer");
    validate_psi(psi);
    if (n < 1) fail(ErrorCode::InvalidConfig, "stage must be positive");
    if (x < 0 || x >= 1) fail(ErrorCode::InvalidConfig, "fiber abscissa must lie in [0,1)");
    if (budget < 1) fail(ErrorCode::InvalidConfig, "budget must be positive");

    const SymmetricEigen2 eig =
        symmetric_eigen_2x2(numer(a(0, 0)), numer(a(0, 1)), numer(a(1, 1)));
    const QuadExt am = abs(eig.lambda_min), aM = abs(eig.lambda_max);
    const bool min_is_small = !(aM < am);
    const QuadExt m_small = min_is_small ? am : aM;
    const QuadExt one = QuadExt::rational(Rat(1), eig.disc);
    if (!(m_small < one))
        fail(ErrorCode::InvalidCounterexampleFamily, "eigenvalue moduli of one are excluded");
    if (!(m_small * Rat(lambda) > one))
        fail(ErrorCode::InvalidCounterexampleFamily, "scaled family must be expanding");

    const double lam_d = to_double(lambda);
    const QuadExt m_big = min_is_small ? aM : am;
    const double l1 = std::log(lam_d * m_small.to_double_approx());
    const double l2 = std::log(lam_d * m_big.to_double_approx());
    const double tau_n = tau_of_n(psi, n);
    if (!(tau_n > 0.0) || !(tau_n < 0.5 * (l2 - l1)))
        fail(ErrorCode::InvalidCounterexampleFamily, "tau_n must lie in (0, (l2 - l1)/2)");

    const BigInt lb = ipow(lambda, static_cast<unsigned long>(n));
    if (lb > (BigInt(1) << 52))
        fail(ErrorCode::BudgetExceeded, "lambda^n exceeds the exactly representable range");

    // Stage quadratic form M = (lambda A)^{2n}: |A_n u|^2 = u^T M u, with
    // det M = lambda^{4n} because A is unimodular.
    const Mat<Rat> a2n = mat_pow(a, static_cast<unsigned long>(2 * n));
    const BigInt lam2n = lb * lb;
    const BigInt m12 = numer(a2n(0, 1)) * lam2n;
    const BigInt m22 = numer(a2n(1, 1)) * lam2n;

    FiberStructure out;
    out.x = to_double(x);
    out.n = n;
    out.length_scale = std::exp(-static_cast<double>(n) * (l2 + tau_n));
    out.gap_scale = std::exp(-static_cast<double>(n) * (l2 - tau_n));
    const QuadExt slope_long = min_is_small ? eig.slope_min : eig.slope_max;
    const double sl = slope_long.to_double_approx();
    out.sin_alpha = 1.0 / std::sqrt(1.0 + sl * sl);

    // Column p contributes the fiber interval centered at
    //   c = q/L + t_c,  t_c = -(M12/M22)(x - p/L),
    // of half-length h(u1) = H sqrt(1 - u1^2 / u_max^2), where
    //   H = psi / sqrt(M22),  u_max = psi sqrt(M22) / lambda^{2n}.
    const double ln_psi = log_psi(psi, n);
    const double ln_sqrt_m22 = 0.5 * ln_bigint(m22);
    const double h_max = std::exp(ln_psi - ln_sqrt_m22);
    const double u_max =
        std::exp(ln_psi + ln_sqrt_m22 - 2.0 * static_cast<double>(n) * std::log(lam_d));
    const double l_min = 0.5 * out.length_scale;  // clipped length filter
    const double thr = 0.5 * l_min;               // half-length at the filter
    out.min_len = l_min;
    out.max_len = 2.0 * h_max;

    if (thr >= h_max) {
        out.materialized = true;
        return out;
    }
    const double ld = to_double(lb);
    const double xd = to_double(x);
    const double u_f = u_max * std::sqrt(1.0 - (thr / h_max) * (thr / h_max));
    const double m_ratio = to_double(m12) / to_double(m22);
    const long long plo = static_cast<long long>(std::ceil((xd - u_f) * ld));
    const long long phi = static_cast<long long>(std::floor((xd + u_f) * ld));

    // A column is kept when its pre-clip half-length reaches thr; within a
    // kept column, q is kept exactly when the clipped length reaches l_min.
    long long total = 0;
    long long kept_lo = 0, kept_hi = -1;
    bool any = false;
    for (long long p = plo; p <= phi; ++p) {
        const double u1 = xd - static_cast<double>(p) / ld;
        const double rel = u1 / u_max;
        const double disc = 1.0 - rel * rel;
        if (disc <= 0.0) continue;
        const double h = h_max * std::sqrt(disc);
        if (h < thr) continue;
        const double tc = -m_ratio * u1;
        const long long qlo = static_cast<long long>(std::ceil((l_min - h - tc) * ld));
        const long long qhi = static_cast<long long>(std::floor((1.0 - l_min + h - tc) * ld));
        if (qhi < qlo) continue;
        total += qhi - qlo + 1;
        if (!any) {
            kept_lo = p;
            any = true;
        }
        kept_hi = p;
    }
    out.count = total;

    if (total <= budget) {
        out.materialized = true;
        out.intervals.reserve(static_cast<std::size_t>(total));
        for (long long p = plo; p <= phi; ++p) {
            const double u1 = xd - static_cast<double>(p) / ld;
            const double rel = u1 / u_max;
            const double disc = 1.0 - rel * rel;
            if (disc <= 0.0) continue;
            const double h = h_max * std::sqrt(disc);
            if (h < thr) continue;
            const double tc = -m_ratio * u1;
            const long long qlo = static_cast<long long>(std::ceil((l_min - h - tc) * ld));
            const long long qhi = static_cast<long long>(std::floor((1.0 - l_min + h - tc) * ld));
            for (long long q = qlo; q <= qhi; ++q) {
                const double c = static_cast<double>(q) / ld + tc;
                out.intervals.push_back({std::max(0.0, c - h), std::min(1.0, c + h)});
            }
        }
        std::sort(out.intervals.begin(), out.intervals.end(),
                  [](const FiberInterval& u, const FiberInterval& v) { return u.lo < v.lo; });
        if (!out.intervals.empty()) {
            double mn_len = 2.0, mx_len = 0.0, mn_gap = 1.0;
            for (std::size_t i = 0; i < out.intervals.size(); ++i) {
                const double len = out.intervals[i].hi - out.intervals[i].lo;
                mn_len = std::min(mn_len, len);
                mx_len = std::max(mx_len, len);
                if (i + 1 < out.intervals.size())
                    mn_gap = std::min(mn_gap, out.intervals[i + 1].lo - out.intervals[i].hi);
            }
            out.min_len = mn_len;
            out.max_len = mx_len;
            out.min_gap = out.intervals.size() > 1 ? mn_gap : 0.0;
        } else {
            out.min_len = 0.0;
            out.max_len = 0.0;
        }
        return out;
    }

    // Summary mode: centers of columns p and p + a differ by
    // (dq + a M12 / M22) / L, so the least center distance over integer dq is
    // dist(a M12 / M22, Z) / L, computed exactly; subtracting the largest
    // possible pair of half-lengths certifies the gap.
    double min_center = 1.0 / ld;  // a = 0: dq >= 1
    const long long a_max = any ? kept_hi - kept_lo : 0;
    for (long long step = 1; step <= a_max; ++step) {
        BigInt r = (BigInt(step) * m12) % m22;
        if (r < 0) r += m22;
        const BigInt alt = m22 - r;
        const BigInt dist = r < alt ? r : alt;
        min_center = std::min(min_center, to_double(Rat(dist, m22)) / ld);
    }
    out.min_gap = std::max(0.0, min_center - 2.0 * h_max);
    return out;
}

// ─────────────────────────────────────────────────────────────────────────────
// Gap certificate for quadratic irrational directions
// ─────────────────────────────────────────────────────────────────────────────

bool liouville_gap_check(const QuadSlope& beta, long m, long zx, long zy) {
    using boost::multiprecision::gcd;
    if (beta.d <= 0 || beta.q == 0 || beta.r == 0)
        fail(ErrorCode::InvalidConfig, "slope must be a real quadratic irrational");
    const BigInt s = isqrt_floor(beta.d);
    if (s * s == beta.d)
        fail(ErrorCode::InvalidConfig, "slope radicand is a perfect square; slope is rational");

    // Minimal polynomial a t^2 + b t + c of beta = (p + q sqrt(D)) / r, primitive.
    BigInt pa = beta.r * beta.r;
    BigInt pb = BigInt(-2) * beta.p * beta.r;
    BigInt pc = beta.p * beta.p - beta.q * beta.q * beta.d;
    const BigInt g = gcd(gcd(abs(pa), abs(pb)), abs(pc));
    pa /= g;
    pb /= g;
    pc /= g;

    // For |u/v - beta| <= 1 the polynomial gives |beta - u/v| >= 1/(K v^2) with
    // K >= a (|beta - conj beta| + 1); B >= 1 + beta^2.  Rational majorants use
    // sqrt(D) <= isqrt(D) + 1.
    const BigInt sq = s + 1;
    const Rat k_rat = Rat(pa) * (Rat(2 * abs(beta.q) * sq) / Rat(abs(beta.r)) + 1);
    const Rat b_rat =
        (Rat(beta.r * beta.r + beta.p * beta.p + beta.q * beta.q * beta.d) +
         Rat(2 * abs(beta.p * beta.q) * sq)) /
        Rat(beta.r * beta.r);
    const Rat c_rat = Rat(1) / (2 * k_rat * b_rat);
    const BigInt m0 = ceil_rat(4 * k_rat * b_rat);
    if (BigInt(m) < m0)
        fail(ErrorCode::BelowThreshold,
             "M is below the admissible threshold M0 = " + m0.str() + " for this slope");

    const QuadExt qbeta(Rat(beta.p) / Rat(beta.r), Rat(beta.q) / Rat(beta.r), beta.d);
    const QuadExt one_plus = QuadExt::rational(Rat(1), beta.d) + qbeta * qbeta;
    const double beta_d = qbeta.to_double_approx();
    const double ext =
        to_double(c_rat) * static_cast<double>(m) / std::sqrt(1.0 + beta_d * beta_d) + 1.0;
    const long wspan = static_cast<long>(std::ceil(ext));
    const Rat m_sq = Rat(BigInt(m) * BigInt(m));

    // Integer z translates the integer lattice onto itself, so only the
    // offsets w = p - z matter.  Rows with |wy - beta wx| >= 2 sit at distance
    // at least 2/sqrt(1+beta^2) >= 2/sqrt(B) > 1/M since M >= M0 >= 4 K B,
    // so only the five rows nearest the line need the exact test.
    (void)zx;
    (void)zy;
    for (long wx = -wspan; wx <= wspan; ++wx) {
        const long base_y = static_cast<long>(std::llround(beta_d * static_cast<double>(wx)));
        for (long k = -2; k <= 2; ++k) {
            const long wy = base_y + k;
            if (wx == 0 && wy == 0) continue;
            // dist^2 M^2 > 1 with dist = |beta wx - wy| / sqrt(1 + beta^2)
            const QuadExt cross = qbeta * Rat(wx) - QuadExt::rational(Rat(wy), beta.d);
            if (!(cross * cross * m_sq > one_plus)) return false;
        }
    }
    return true;
}

// ─────────────────────────────────────────────────────────────────────────────
// Covering counts
// ─────────────────────────────────────────────────────────────────────────────

CoveringCount covering_count(const MatrixFamily& fam, const PsiSpec& psi, long n, int k,
                             long long budget) {
    validate_family(fam);
    validate_psi(psi);
    check_stage(fam, n);
    const int d = fam.d;
    if (d < 1 || d > 3) fail(ErrorCode::InvalidConfig, "covering counts are capped at dimension 3");
    if (k < 1 || k > d) fail(ErrorCode::InvalidConfig, "pivot index must lie in [1, d]");
    if (budget < 1) fail(ErrorCode::InvalidConfig, "budget must be positive");

    SpectralProfile<double> pr = spectral_profile(fam, psi, n);
    pr.h = h_profile(fam, n).h;
    const IndexSets sets = index_sets(pr, k - 1, true);

    const double t = pr.tau + pr.l[static_cast<std::size_t>(k - 1)];
    if (t <= 1e-9)
        fail(ErrorCode::NonExpandingDenominator, "tau_n + l_{n,k} must be positive");

    double expo = 0.0;
    for (int i : sets.k2) expo += pr.l[static_cast<std::size_t>(k - 1)] - pr.l[static_cast<std::size_t>(i)];
    for (double li : pr.l) expo += li;
    for (int i : sets.gamma) expo += t - (*pr.h)[static_cast<std::size_t>(i)];

    CoveringCount out;
    out.pivot = k;
    out.formula = std::exp(static_cast<double>(n) * expo);

    const double r_n = std::exp(-static_cast<double>(n) * t);
    const double psi_n = psi_value(psi, n);

    // Frame: identity for axis-aligned lattices, otherwise the normalized
    // reduced basis of Lambda_n.
    const bool axis_frame =
        fam.kind == FamilyKind::Diagonal || fam.kind == FamilyKind::ScaledPower;
    Mat<double> u_inv = Mat<double>::identity(d);
    if (!axis_frame) {
        LatticeData lat = lattice_from_matrix(generate_matrix_exact(fam, n));
        successive_minima(lat);
        reduced_basis(lat);
        Mat<double> u(d, d);
        for (int j = 0; j < d; ++j) {
            const Vec<Rat> col = lat.reduced->column(j);
            const double len = std::sqrt(to_double(norm_sq(col)));
            for (int i = 0; i < d; ++i) u(i, j) = to_double(col[static_cast<std::size_t>(i)]) / len;
        }
        u_inv = inverse(u);
    }

    // Half-widths of the ellipsoid bounding box in the frame coordinates.
    Mat<double> ainv_d(d, d, 0.0);
    if (fam.kind == FamilyKind::Diagonal) {
        const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
        for (int j = 0; j < d; ++j)
            ainv_d(j, j) = fam.diag_log_scale
                               ? std::exp(-to_double(row[static_cast<std::size_t>(j)]))
                               : 1.0 / to_double(row[static_cast<std::size_t>(j)]);
    } else {
        ainv_d = mat_cast<double>(inverse(generate_matrix_exact(fam, n)));
    }
    const Mat<double> m_frame = axis_frame ? ainv_d : u_inv * ainv_d;
    std::vector<double> hw(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double row = 0.0;
        for (int i = 0; i < d; ++i) row += m_frame(j, i) * m_frame(j, i);
        hw[static_cast<std::size_t>(j)] = psi_n * std::sqrt(row);
    }

    // Centers of F_n(0).
    constexpr double kIterCap = 2.5e7;
    const Vec<Rat> zero(static_cast<std::size_t>(d), Rat(0));
    const CenterGrid grid = center_grid(fam, n, zero, kIterCap, 4.0e6);
    std::vector<std::array<double, 3>> pts;
    if (grid.grid) {
        if (!grid.feasible)
            fail(ErrorCode::BudgetExceeded, "covering sweep exceeds the iteration cap");
    } else {
        const PreimageSet pre = enumerate_preimages(fam, n, zero, kMaterializeCap);
        if (!pre.materialized)
            fail(ErrorCode::BudgetExceeded, "covering sweep needs materialized preimages");
        pts.reserve(pre.points.size());
        for (const Vec<Rat>& pt : pre.points) {
            std::array<double, 3> c{0.0, 0.0, 0.0};
            for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] = to_double(pt[static_cast<std::size_t>(j)]);
            pts.push_back(c);
        }
    }

    // Pass 1: per-ellipsoid translate boxes, their sum, and the global ranges.
    const double inv_side = 1.0 / (2.0 * r_n);
    double total = 0.0;
    std::array<double, 3> glo{0.0, 0.0, 0.0}, ghi{0.0, 0.0, 0.0};
    bool first = true;
    auto tally = [&](const std::array<double, 3>& z) {
        std::array<double, 3> s{0.0, 0.0, 0.0};
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int i = 0; i < d; ++i) v += u_inv(j, i) * z[static_cast<std::size_t>(i)];
            s[static_cast<std::size_t>(j)] = v;
        }
        double cnt = 1.0;
        for (int j = 0; j < d; ++j) {
            const double lo = std::floor((s[static_cast<std::size_t>(j)] - hw[static_cast<std::size_t>(j)]) * inv_side);
            const double hi = std::floor((s[static_cast<std::size_t>(j)] + hw[static_cast<std::size_t>(j)]) * inv_side);
            cnt *= hi - lo + 1.0;
            if (first || lo < glo[static_cast<std::size_t>(j)]) glo[static_cast<std::size_t>(j)] = lo;
            if (first || hi > ghi[static_cast<std::size_t>(j)]) ghi[static_cast<std::size_t>(j)] = hi;
        }
        first = false;
        total += cnt;
    };
    sweep_centers(grid, pts, d, tally);

    // Pass 2: exact merge of shared translates when the list and the packed
    // key space both fit; otherwise report the per-ellipsoid sum.
    long double keyspace = 1.0L;
    for (int j = 0; j < d; ++j)
        keyspace *= static_cast<long double>(ghi[static_cast<std::size_t>(j)] - glo[static_cast<std::size_t>(j)] + 1.0);
    if (!first && total <= static_cast<double>(budget) && keyspace < 1.8e19L) {
        std::array<unsigned long long, 3> range{1, 1, 1};
        for (int j = 0; j < d; ++j)
            range[static_cast<std::size_t>(j)] = static_cast<unsigned long long>(
                ghi[static_cast<std::size_t>(j)] - glo[static_cast<std::size_t>(j)] + 1.0);
        std::vector<std::uint64_t> keys;
        keys.reserve(static_cast<std::size_t>(total));
        auto collect = [&](const std::array<double, 3>& z) {
            std::array<double, 3> s{0.0, 0.0, 0.0};
            for (int j = 0; j < d; ++j) {
                double v = 0.0;
                for (int i = 0; i < d; ++i) v += u_inv(j, i) * z[static_cast<std::size_t>(i)];
                s[static_cast<std::size_t>(j)] = v;
            }
            std::array<long long, 3> lo{0, 0, 0}, hi{0, 0, 0};
            for (int j = 0; j < d; ++j) {
                lo[static_cast<std::size_t>(j)] = static_cast<long long>(
                    std::floor((s[static_cast<std::size_t>(j)] - hw[static_cast<std::size_t>(j)]) * inv_side) -
                    glo[static_cast<std::size_t>(j)]);
                hi[static_cast<std::size_t>(j)] = static_cast<long long>(
                    std::floor((s[static_cast<std::size_t>(j)] + hw[static_cast<std::size_t>(j)]) * inv_side) -
                    glo[static_cast<std::size_t>(j)]);
            }
            for (long long ix = lo[0]; ix <= hi[0]; ++ix) {
                const long long jyl = d >= 2 ? lo[1] : 0, jyh = d >= 2 ? hi[1] : 0;
                for (long long iy = jyl; iy <= jyh; ++iy) {
                    const long long jzl = d >= 3 ? lo[2] : 0, jzh = d >= 3 ? hi[2] : 0;
                    for (long long iz = jzl; iz <= jzh; ++iz) {
                        std::uint64_t key = static_cast<std::uint64_t>(ix);
                        if (d >= 2) key = key * range[1] + static_cast<std::uint64_t>(iy);
                        if (d >= 3) key = key * range[2] + static_cast<std::uint64_t>(iz);
                        keys.push_back(key);
                    }
                }
            }
        };
        sweep_centers(grid, pts, d, collect);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        out.constructive = static_cast<double>(keys.size());
        out.deduplicated = true;
    } else {
        out.constructive = total;
        out.deduplicated = false;
    }
    out.ratio = out.formula > 0.0 ? out.constructive / out.formula : 0.0;
    return out;
}

}  // namespace hdim
