#include "hdim/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

namespace hdim {

namespace {

// ── exact Gram-Schmidt data for basis columns ─────────────────────────────

struct Gso {
    Mat<Rat> mu;       // mu(i,j) = <b_i, b*_j> / |b*_j|^2, i > j
    Vec<Rat> norm_sq;  // |b*_i|^2, positive for an invertible basis
};

Gso compute_gso(const Mat<Rat>& c) {
    const int d = c.cols();
    Gso g{Mat<Rat>(d, d), Vec<Rat>(static_cast<std::size_t>(d))};
    std::vector<Vec<Rat>> bstar(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        Vec<Rat> v = c.column(i);
        for (int j = 0; j < i; ++j) {
            Rat m = dot(c.column(i), bstar[static_cast<std::size_t>(j)]) /
                    g.norm_sq[static_cast<std::size_t>(j)];
            g.mu(i, j) = m;
            for (std::size_t r = 0; r < v.size(); ++r)
                v[r] -= m * bstar[static_cast<std::size_t>(j)][r];
        }
        g.norm_sq[static_cast<std::size_t>(i)] = norm_sq(v);
        if (g.norm_sq[static_cast<std::size_t>(i)] == 0)
            fail(ErrorCode::SingularMatrix, "lattice basis is not full rank");
        bstar[static_cast<std::size_t>(i)] = std::move(v);
    }
    return g;
}

BigInt round_rat(const Rat& x) { return floor_rat(x + Rat(1, 2)); }

void add_column_multiple(Mat<Rat>& c, Mat<BigInt>& t, int dst, int src, const BigInt& q) {
    if (q == 0) return;
    for (int r = 0; r < c.rows(); ++r) c(r, dst) += Rat(q) * c(r, src);
    for (int r = 0; r < t.rows(); ++r) t(r, dst) += q * t(r, src);
}

void swap_columns(Mat<Rat>& c, Mat<BigInt>& t, int a, int b) {
    for (int r = 0; r < c.rows(); ++r) std::swap(c(r, a), c(r, b));
    for (int r = 0; r < t.rows(); ++r) std::swap(t(r, a), t(r, b));
}

// LLL with delta = 99/100 on columns frozen..d-1; columns before `frozen`
// are never moved, but later columns are size-reduced against them.
void lll_reduce(Mat<Rat>& c, Mat<BigInt>& t, int frozen) {
    const int d = c.cols();
    if (d - frozen < 1) return;
    const Rat delta(99, 100);
    Gso g = compute_gso(c);
    int k = frozen + 1;
    while (k < d) {
        bool changed = false;
        for (int j = k - 1; j >= 0; --j) {
            BigInt q = round_rat(g.mu(k, j));
            if (q != 0) {
                add_column_multiple(c, t, k, j, -q);
                changed = true;
            }
        }
        if (changed) g = compute_gso(c);
        Rat lhs = g.norm_sq[static_cast<std::size_t>(k)];
        Rat rhs = (delta - g.mu(k, k - 1) * g.mu(k, k - 1)) *
                  g.norm_sq[static_cast<std::size_t>(k - 1)];
        if (k > frozen && lhs < rhs) {
            swap_columns(c, t, k, k - 1);
            g = compute_gso(c);
            k = std::max(k - 1, frozen + 1);
        } else {
            ++k;
        }
    }
}

// ── shortest vector outside the span of the first `prefix` columns ────────

struct WitnessPick {
    Rat norm_sq{0};
    Vec<BigInt> coeffs_orig;  // canonical: first nonzero positive, lex-least
    Vec<BigInt> coeffs_cur;   // matching coefficients in the working basis
};

struct MinSearch {
    const Mat<Rat>* c = nullptr;
    const Mat<BigInt>* t = nullptr;
    const Gso* gso = nullptr;
    int d = 0;
    int prefix = 0;
    long* nodes = nullptr;
    long budget = 0;
    std::vector<BigInt> x;
    WitnessPick pick;

    void charge() {
        if (++*nodes > budget)
            fail(ErrorCode::BudgetExceeded,
                 "lattice enumeration exceeded " + std::to_string(budget) +
                     " nodes; minima below index " + std::to_string(prefix + 1) +
                     " are certified, the rest are not");
    }

    Rat center_at(int level) const {
        Rat center(0);
        for (int j = level + 1; j < d; ++j)
            if (x[static_cast<std::size_t>(j)] != 0)
                center -= gso->mu(j, level) * Rat(x[static_cast<std::size_t>(j)]);
        return center;
    }

    void offer(const Rat& total) {
        if (total > pick.norm_sq) return;
        Vec<BigInt> orig(static_cast<std::size_t>(d), BigInt(0));
        for (int r = 0; r < d; ++r)
            for (int j = 0; j < d; ++j)
                if (x[static_cast<std::size_t>(j)] != 0)
                    orig[static_cast<std::size_t>(r)] +=
                        (*t)(r, j) * x[static_cast<std::size_t>(j)];
        Vec<BigInt> cur(x.begin(), x.end());
        int sign = 0;
        for (const BigInt& v : orig)
            if (v != 0) {
                sign = v > 0 ? 1 : -1;
                break;
            }
        if (sign < 0) {
            for (BigInt& v : orig) v = -v;
            for (BigInt& v : cur) v = -v;
        }
        bool take = total < pick.norm_sq || pick.coeffs_orig.empty() ||
                    std::lexicographical_compare(orig.begin(), orig.end(),
                                                 pick.coeffs_orig.begin(), pick.coeffs_orig.end());
        if (take) {
            pick.norm_sq = total;
            pick.coeffs_orig = std::move(orig);
            pick.coeffs_cur = std::move(cur);
        }
    }

    // Bottom level: for a fixed prefix the norm is a parabola in x_0, so only
    // the integers flanking the center can attain the minimum.
    void leaf_level(const Rat& partial, bool upper_zero) {
        charge();
        Rat center = center_at(0);
        BigInt lo = floor_rat(center);
        std::vector<BigInt> cands = {lo, lo + 1};
        if (prefix == 0 && upper_zero) {
            std::vector<BigInt> keep;
            for (const BigInt& v : cands)
                if (v != 0) keep.push_back(v);
            keep.push_back(BigInt(-1));
            keep.push_back(BigInt(1));
            cands = std::move(keep);
        }
        const Rat& b0 = gso->norm_sq[0];
        for (const BigInt& cand : cands) {
            Rat diff = Rat(cand) - center;
            Rat total = partial + b0 * diff * diff;
            if (total > pick.norm_sq) continue;
            x[0] = cand;
            offer(total);
        }
    }

    void descend(int level, const Rat& partial, bool upper_zero) {
        if (level == 0) {
            leaf_level(partial, upper_zero);
            return;
        }
        charge();
        Rat center = center_at(level);
        BigInt up = round_rat(center);
        BigInt down = up - 1;
        const Rat& bl = gso->norm_sq[static_cast<std::size_t>(level)];
        while (true) {
            Rat du = Rat(up) - center;
            du *= du;
            Rat dd = Rat(down) - center;
            dd *= dd;
            BigInt cand;
            Rat dist2;
            if (du <= dd) {
                cand = up;
                dist2 = du;
                ++up;
            } else {
                cand = down;
                dist2 = dd;
                --down;
            }
            Rat next = partial + bl * dist2;
            if (next > pick.norm_sq) break;
            x[static_cast<std::size_t>(level)] = cand;
            bool zero_chain = upper_zero && cand == 0;
            if (level == prefix && zero_chain) continue;  // span of found witnesses
            descend(level - 1, next, zero_chain);
        }
        x[static_cast<std::size_t>(level)] = 0;
    }

    WitnessPick run() {
        x.assign(static_cast<std::size_t>(d), BigInt(0));
        // Any column outside the prefix bounds the minimum from above; the
        // enumeration revisits that column itself, so a witness always shows
        // up at or below this radius.
        pick.norm_sq = norm_sq(c->column(prefix));
        for (int j = prefix + 1; j < d; ++j)
            pick.norm_sq = std::min(pick.norm_sq, norm_sq(c->column(j)));
        pick.coeffs_orig.clear();
        descend(d - 1, Rat(0), true);
        if (pick.coeffs_orig.empty())
            fail(ErrorCode::NumericalFailure, "lattice enumeration found no witness");
        return pick;
    }
};

// Unimodular matrix whose first column is the given primitive vector.
Mat<BigInt> unimodular_with_first_column(const Vec<BigInt>& v) {
    const int r = static_cast<int>(v.size());
    Mat<BigInt> u = Mat<BigInt>::identity(r);
    BigInt lead = v[0];
    // Fold coordinates into position 0 with elementary 2x2 steps, tracking
    // the product of inverse steps whose first column rebuilds v.
    std::vector<std::pair<int, Vec<BigInt>>> steps;  // (k, [a,b,s,t]) with s*a + t*b = g
    Vec<BigInt> cur = v;
    for (int k = 1; k < r; ++k) {
        BigInt a = cur[0], b = cur[static_cast<std::size_t>(k)];
        if (b == 0) continue;
        BigInt old_a = a, old_b = b;
        BigInt s = 1, t = 0, s1 = 0, t1 = 1;
        while (b != 0) {  // extended Euclid on (a, b)
            BigInt q = a / b;
            BigInt tmp = a - q * b;
            a = b;
            b = tmp;
            BigInt ns = s - q * s1, nt = t - q * t1;
            s = s1;
            t = t1;
            s1 = ns;
            t1 = nt;
        }
        if (a < 0) {
            a = -a;
            s = -s;
            t = -t;
        }
        // E acts on rows (0,k): [[s, t], [-old_b/g, old_a/g]], det = 1.
        // E^{-1} = [[old_a/g, -t], [old_b/g, s]].
        Mat<BigInt> einv = Mat<BigInt>::identity(r);
        einv(0, 0) = old_a / a;
        einv(0, k) = -t;
        einv(k, 0) = old_b / a;
        einv(k, k) = s;
        u = u * einv;
        cur[0] = a;
        cur[static_cast<std::size_t>(k)] = 0;
    }
    if (cur[0] != 1 && cur[0] != -1)
        fail(ErrorCode::NumericalFailure, "witness coefficient vector is not primitive");
    if (cur[0] == -1)
        for (int i = 0; i < r; ++i) u(i, 0) = -u(i, 0);
    (void)lead;
    return u;
}

// Replace columns prefix..d-1 so that column `prefix` spans the new witness
// direction while the whole matrix stays a basis of the same lattice.
void extend_prefix(Mat<Rat>& c, Mat<BigInt>& t, int prefix, const Vec<BigInt>& coeffs_cur) {
    const int d = c.cols();
    const int r = d - prefix;
    Vec<BigInt> tail(static_cast<std::size_t>(r));
    BigInt g = 0;
    for (int j = 0; j < r; ++j) {
        tail[static_cast<std::size_t>(j)] = coeffs_cur[static_cast<std::size_t>(prefix + j)];
        g = boost::multiprecision::gcd(g, tail[static_cast<std::size_t>(j)]);
    }
    if (g == 0) fail(ErrorCode::NumericalFailure, "witness lies in the span of its predecessors");
    for (BigInt& v : tail) v /= g;
    Mat<BigInt> u = unimodular_with_first_column(tail);

    Mat<Rat> new_c(c.rows(), r);
    Mat<BigInt> new_t(t.rows(), r);
    for (int jc = 0; jc < r; ++jc)
        for (int row = 0; row < c.rows(); ++row) {
            Rat acc(0);
            BigInt acct = 0;
            for (int js = 0; js < r; ++js) {
                const BigInt& m = u(js, jc);
                if (m == 0) continue;
                acc += Rat(m) * c(row, prefix + js);
                acct += m * t(row, prefix + js);
            }
            new_c(row, jc) = acc;
            new_t(row, jc) = acct;
        }
    for (int jc = 0; jc < r; ++jc)
        for (int row = 0; row < c.rows(); ++row) {
            c(row, prefix + jc) = new_c(row, jc);
            t(row, prefix + jc) = new_t(row, jc);
        }
    if (g == 1) {
        // Make the new prefix column the witness itself (adds multiples of
        // earlier prefix columns; unimodular).
        for (int i = 0; i < prefix; ++i)
            add_column_multiple(c, t, prefix, i, coeffs_cur[static_cast<std::size_t>(i)]);
    }
}

double sqrt_to_double(const Rat& sq) { return to_double(sqrt(to_bigfloat(sq))); }

struct MinimaRow {
    Rat m_sq;
    Vec<BigInt> coeffs;
    Vec<Rat> vec;
    Vec<Rat> basis_col;  // matching reduced-basis column
};

void minima_single_block(const Mat<Rat>& basis, long budget, std::vector<MinimaRow>& rows) {
    const int d = basis.cols();
    Mat<Rat> c = basis;
    Mat<BigInt> t = Mat<BigInt>::identity(d);
    lll_reduce(c, t, 0);
    long nodes = 0;
    for (int k = 0; k < d; ++k) {
        Gso g = compute_gso(c);
        MinSearch search;
        search.c = &c;
        search.t = &t;
        search.gso = &g;
        search.d = d;
        search.prefix = k;
        search.nodes = &nodes;
        search.budget = budget;
        WitnessPick w = search.run();
        MinimaRow row;
        row.m_sq = w.norm_sq;
        row.coeffs = w.coeffs_orig;
        Vec<Rat> amb(static_cast<std::size_t>(basis.rows()), Rat(0));
        for (int r = 0; r < basis.rows(); ++r)
            for (int j = 0; j < d; ++j)
                if (w.coeffs_orig[static_cast<std::size_t>(j)] != 0)
                    amb[static_cast<std::size_t>(r)] +=
                        Rat(w.coeffs_orig[static_cast<std::size_t>(j)]) * basis(r, j);
        row.vec = std::move(amb);
        extend_prefix(c, t, k, w.coeffs_cur);
        row.basis_col = c.column(k);
        rows.push_back(std::move(row));
        if (k + 1 < d) lll_reduce(c, t, k + 1);
    }
}

}  // namespace

LatticeData lattice_from_matrix(const Mat<Rat>& a) {
    Rat dt = det(a);
    if (dt == 0) fail(ErrorCode::SingularMatrix, "matrix is singular");
    LatticeData lat;
    lat.basis = inverse(a);
    lat.covolume = abs(Rat(1) / dt);
    return lat;
}

LatticeData lattice_from_matrix(const Mat<double>& a) {
    return lattice_from_matrix(mat_cast<Rat>(a));
}

LatticeData lattice_from_basis(const Mat<Rat>& basis) {
    Rat dt = det(basis);
    if (dt == 0) fail(ErrorCode::SingularMatrix, "basis is singular");
    LatticeData lat;
    lat.basis = basis;
    lat.covolume = abs(dt);
    return lat;
}

void successive_minima(LatticeData& lat, long node_budget) {
    const int d = lat.basis.cols();
    if (d < 1 || lat.basis.rows() != d)
        fail(ErrorCode::InvalidConfig, "lattice basis must be square");
    if (d > 6) fail(ErrorCode::InvalidConfig, "successive minima are capped at dimension 6");

    std::vector<MinimaRow> rows;
    std::vector<std::vector<int>> comps = block_components(lat.basis);
    if (comps.size() == 1) {
        minima_single_block(lat.basis, node_budget, rows);
    } else {
        for (const auto& idx : comps) {
            Mat<Rat> sub = submatrix(lat.basis, idx);
            std::vector<MinimaRow> part;
            minima_single_block(sub, node_budget, part);
            for (MinimaRow& row : part) {
                MinimaRow full;
                full.m_sq = row.m_sq;
                full.coeffs.assign(static_cast<std::size_t>(d), BigInt(0));
                full.vec.assign(static_cast<std::size_t>(d), Rat(0));
                full.basis_col.assign(static_cast<std::size_t>(d), Rat(0));
                for (std::size_t j = 0; j < idx.size(); ++j) {
                    full.coeffs[static_cast<std::size_t>(idx[j])] = row.coeffs[j];
                    full.vec[static_cast<std::size_t>(idx[j])] = row.vec[j];
                    full.basis_col[static_cast<std::size_t>(idx[j])] = row.basis_col[j];
                }
                rows.push_back(std::move(full));
            }
        }
        std::stable_sort(rows.begin(), rows.end(), [](const MinimaRow& a, const MinimaRow& b) {
            if (a.m_sq != b.m_sq) return a.m_sq < b.m_sq;
            return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(),
                                                b.coeffs.begin(), b.coeffs.end());
        });
    }

    lat.minima_sq.clear();
    lat.minima.clear();
    lat.witness_coeffs.clear();
    lat.witnesses.clear();
    Mat<Rat> reduced(d, d);
    for (int k = 0; k < d; ++k) {
        const MinimaRow& row = rows[static_cast<std::size_t>(k)];
        lat.minima_sq.push_back(row.m_sq);
        lat.minima.push_back(sqrt_to_double(row.m_sq));
        lat.witness_coeffs.push_back(row.coeffs);
        lat.witnesses.push_back(row.vec);
        for (int r = 0; r < d; ++r) reduced(r, k) = row.basis_col[static_cast<std::size_t>(r)];
    }
    for (int k = 1; k < d; ++k)
        if (lat.minima_sq[static_cast<std::size_t>(k)] < lat.minima_sq[static_cast<std::size_t>(k - 1)])
            fail(ErrorCode::NumericalFailure, "successive minima came out unsorted");
    lat.reduced = std::move(reduced);
}

void reduced_basis(LatticeData& lat) {
    if (!lat.has_minima() || !lat.reduced)
        fail(ErrorCode::InvalidConfig, "reduced basis requires successive minima");
    const Mat<Rat>& v = *lat.reduced;
    if (abs(det(v)) != lat.covolume)
        fail(ErrorCode::NumericalFailure, "reduced basis does not generate the lattice");
    Gso g = compute_gso(v);
    double factor = 1.0;
    for (int k = 0; k < v.cols(); ++k) {
        const Rat& m_sq = lat.minima_sq[static_cast<std::size_t>(k)];
        Rat len_sq = norm_sq(v.column(k));
        factor = std::max(factor, sqrt_to_double(len_sq / m_sq));
        factor = std::max(factor, sqrt_to_double(m_sq / g.norm_sq[static_cast<std::size_t>(k)]));
    }
    lat.reduction_factor = factor;
}

Vec<Rat> brute_force_minima_sq(const LatticeData& lat, long box_bound) {
    const int d = lat.basis.cols();
    if (d > 3) fail(ErrorCode::InvalidConfig, "brute-force oracle is capped at dimension 3");
    if (box_bound < 1) fail(ErrorCode::InvalidConfig, "box bound must be positive");
    double total = std::pow(2.0 * static_cast<double>(box_bound) + 1.0, d);
    if (total > 2e6)
        fail(ErrorCode::BudgetExceeded, "brute-force box holds more than 2e6 candidates");

    // Clear denominators so every candidate norm is a plain integer.
    BigInt den = 1;
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j)
            den = boost::multiprecision::lcm(den, denom(lat.basis(r, j)));
    Mat<BigInt> w(d, d);
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j) {
            Rat scaled = lat.basis(r, j) * Rat(den);
            w(r, j) = numer(scaled);
        }

    struct Cand {
        BigInt norm_sq;
        std::array<long, 3> coeffs;
    };
    std::vector<Cand> all;
    all.reserve(static_cast<std::size_t>(total));
    std::vector<long> idx(static_cast<std::size_t>(d), -box_bound);
    while (true) {
        bool all_zero = true;
        for (int j = 0; j < d; ++j)
            if (idx[static_cast<std::size_t>(j)] != 0) all_zero = false;
        if (!all_zero) {
            BigInt nsq = 0;
            for (int r = 0; r < d; ++r) {
                BigInt acc = 0;
                for (int j = 0; j < d; ++j)
                    if (idx[static_cast<std::size_t>(j)] != 0)
                        acc += w(r, j) * idx[static_cast<std::size_t>(j)];
                nsq += acc * acc;
            }
            Cand c{std::move(nsq), {0, 0, 0}};
            for (int j = 0; j < d; ++j) c.coeffs[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j)];
            all.push_back(std::move(c));
        }
        int j = 0;
        for (; j < d; ++j) {
            if (idx[static_cast<std::size_t>(j)] < box_bound) {
                ++idx[static_cast<std::size_t>(j)];
                break;
            }
            idx[static_cast<std::size_t>(j)] = -box_bound;
        }
        if (j == d) break;
    }

    std::sort(all.begin(), all.end(), [](const Cand& a, const Cand& b) {
        if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
        return a.coeffs < b.coeffs;
    });

    // Greedy independent front: exact rank via integer elimination on the
    // picked ambient vectors.
    auto ambient_int = [&](const std::array<long, 3>& coeffs) {
        Vec<BigInt> amb(static_cast<std::size_t>(d), BigInt(0));
        for (int r = 0; r < d; ++r)
            for (int j = 0; j < d; ++j)
                if (coeffs[static_cast<std::size_t>(j)] != 0)
                    amb[static_cast<std::size_t>(r)] += w(r, j) * coeffs[static_cast<std::size_t>(j)];
        return amb;
    };
    auto independent = [&](std::vector<Vec<BigInt>> rows) {
        std::size_t rank = 0;
        for (int col = 0; col < d && rank < rows.size(); ++col) {
            std::size_t piv = rank;
            while (piv < rows.size() && rows[piv][static_cast<std::size_t>(col)] == 0) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[rank], rows[piv]);
            for (std::size_t r = rank + 1; r < rows.size(); ++r) {
                if (rows[r][static_cast<std::size_t>(col)] == 0) continue;
                BigInt a = rows[rank][static_cast<std::size_t>(col)];
                BigInt b = rows[r][static_cast<std::size_t>(col)];
                for (int j = 0; j < d; ++j)
                    rows[r][static_cast<std::size_t>(j)] =
                        rows[r][static_cast<std::size_t>(j)] * a -
                        rows[rank][static_cast<std::size_t>(j)] * b;
            }
            ++rank;
        }
        return rank == rows.size();
    };

    Vec<Rat> minima;
    std::vector<Vec<BigInt>> picked;
    const Rat den_sq = Rat(den) * Rat(den);
    for (const Cand& cand : all) {
        if (static_cast<int>(picked.size()) == d) break;
        std::vector<Vec<BigInt>> trial = picked;
        trial.push_back(ambient_int(cand.coeffs));
        if (independent(trial)) {
            picked = std::move(trial);
            minima.push_back(Rat(cand.norm_sq) / den_sq);
        }
    }
    if (static_cast<int>(minima.size()) < d)
        fail(ErrorCode::InsufficientBox, "box contains fewer than d independent vectors");

    // Certificate: every vector at least as short as the found d-th minimum
    // has coefficients |x_i| <= |row_i(basis^{-1})| * m_d, which must fit in
    // the box.
    Mat<Rat> inv = inverse(lat.basis);
    const Rat& md_sq = minima.back();
    for (int i = 0; i < d; ++i) {
        Rat row_sq(0);
        for (int j = 0; j < d; ++j) row_sq += inv(i, j) * inv(i, j);
        if (Rat(box_bound) * Rat(box_bound) < row_sq * md_sq)
            fail(ErrorCode::InsufficientBox,
                 "box bound cannot certify the minima; enlarge it");
    }
    return minima;
}

std::vector<Vec<BigInt>> lattice_points_in_ball(const Mat<Rat>& basis, const Vec<Rat>& target,
                                                const Rat& radius_sq, long max_points) {
    const int d = basis.cols();
    if (d < 1 || basis.rows() != d) fail(ErrorCode::InvalidConfig, "basis must be square");
    if (static_cast<int>(target.size()) != d)
        fail(ErrorCode::InvalidConfig, "target dimension disagrees with the basis");
    if (max_points < 1) fail(ErrorCode::InvalidConfig, "point budget must be positive");
    std::vector<Vec<BigInt>> out;
    if (radius_sq < 0) return out;

    // Reduce a copy so the enumeration tree stays narrow; columns of `c` are
    // basis * t, so coefficients found against c map back through t.
    Mat<Rat> c = basis;
    Mat<BigInt> t = Mat<BigInt>::identity(d);
    lll_reduce(c, t, 0);
    Gso g = compute_gso(c);

    std::vector<Vec<Rat>> bstar(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        Vec<Rat> v = c.column(i);
        for (int j = 0; j < i; ++j)
            for (int r = 0; r < d; ++r)
                v[static_cast<std::size_t>(r)] -=
                    g.mu(i, j) * bstar[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
        bstar[static_cast<std::size_t>(i)] = std::move(v);
    }
    Vec<Rat> tproj(static_cast<std::size_t>(d), Rat(0));
    for (int i = 0; i < d; ++i) {
        Rat dp(0);
        for (int r = 0; r < d; ++r)
            dp += target[static_cast<std::size_t>(r)] *
                  bstar[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
        tproj[static_cast<std::size_t>(i)] = dp / g.norm_sq[static_cast<std::size_t>(i)];
    }

    Vec<BigInt> xi(static_cast<std::size_t>(d), BigInt(0));
    auto descend = [&](auto&& self, int level, const Rat& room) -> void {
        if (level < 0) {
            if (static_cast<long>(out.size()) >= max_points)
                fail(ErrorCode::BudgetExceeded, "ball enumeration exceeded the point budget");
            Vec<BigInt> orig(static_cast<std::size_t>(d), BigInt(0));
            for (int r = 0; r < d; ++r) {
                BigInt acc = 0;
                for (int j = 0; j < d; ++j) acc += t(r, j) * xi[static_cast<std::size_t>(j)];
                orig[static_cast<std::size_t>(r)] = std::move(acc);
            }
            out.push_back(std::move(orig));
            return;
        }
        Rat center = tproj[static_cast<std::size_t>(level)];
        for (int j = level + 1; j < d; ++j)
            center -= Rat(xi[static_cast<std::size_t>(j)]) * g.mu(j, level);
        const BigInt base = round_rat(center);
        // Walk each side of the rounded center; the used budget is monotone
        // along either direction, so the first failure ends that side.
        for (int side = 0; side < 2; ++side) {
            BigInt k = side == 0 ? base : base + 1;
            const int step = side == 0 ? -1 : 1;
            while (true) {
                const Rat diff = Rat(k) - center;
                const Rat used = diff * diff * g.norm_sq[static_cast<std::size_t>(level)];
                if (used > room) break;
                xi[static_cast<std::size_t>(level)] = k;
                self(self, level - 1, room - used);
                k += step;
            }
        }
    };
    descend(descend, d - 1, radius_sq);
    return out;
}

MinkowskiBounds minkowski_bounds(int d) {
    if (d < 1) fail(ErrorCode::InvalidConfig, "dimension must be positive");
    double vd = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    MinkowskiBounds b;
    b.upper = std::pow(2.0, d) / vd;
    b.lower = b.upper / std::tgamma(static_cast<double>(d) + 1.0);
    b.first_minimum_factor = 2.0 / std::pow(vd, 1.0 / d);
    return b;
}

HProfile h_profile(const MatrixFamily& fam, long n) {
    validate_family(fam);
    if (n < 1 || n > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "family has no matrix at n=" + std::to_string(n));
    HProfile out;
    switch (fam.kind) {
        case FamilyKind::Diagonal: {
            const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
            if (fam.diag_log_scale) {
                for (const Rat& q : row) out.h.push_back(to_double(q) / static_cast<double>(n));
                std::sort(out.h.begin(), out.h.end(), std::greater<>());
                return out;
            }
            std::vector<Rat> inv_sq;
            for (const Rat& e : row) inv_sq.push_back(Rat(1) / (e * e));
            std::sort(inv_sq.begin(), inv_sq.end());
            for (const Rat& msq : inv_sq) {
                out.minima_sq.push_back(msq);
                out.h.push_back(-log_rat(msq) / (2.0 * static_cast<double>(n)));
            }
            return out;
        }
        case FamilyKind::ScaledPower: {
            // (lambda A)^{-n} Z^d = lambda^{-n} Z^d for unimodular integer A.
            Rat m = rat_pow(Rat(fam.scale), -n);
            double h = log_rat(Rat(fam.scale));
            for (int i = 0; i < fam.d; ++i) {
                out.minima_sq.push_back(m * m);
                out.h.push_back(h);
            }
            return out;
        }
        default: {
            Mat<Rat> a = generate_matrix_exact(fam, n);
            LatticeData lat = lattice_from_matrix(a);
            successive_minima(lat);
            for (const Rat& msq : lat.minima_sq) {
                out.minima_sq.push_back(msq);
                out.h.push_back(-log_rat(msq) / (2.0 * static_cast<double>(n)));
            }
            return out;
        }
    }
}

}  // namespace hdim
