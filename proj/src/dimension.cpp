#include "hdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "hdim/errors.hpp"
#include "hdim/lattice.hpp"
#include "hdim/numeric.hpp"

namespace hdim {

namespace {

// Threshold comparisons: exact for rationals, tie-tolerant for doubles.  A
// double within 1e-12 of a threshold is treated as sitting on it, so it stays
// out of the strict sets and inside the loose one.
template <class T>
struct Cmp;

template <>
struct Cmp<double> {
    static bool gt(double a, double b) { return a > b + 1e-12; }
    static bool lt(double a, double b) { return a < b - 1e-12; }
    static bool ge(double a, double b) { return a >= b - 1e-12; }
    static bool expanding(double t) { return t > 1e-9; }
    static bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }
};

template <>
struct Cmp<Rat> {
    static bool gt(const Rat& a, const Rat& b) { return a > b; }
    static bool lt(const Rat& a, const Rat& b) { return a < b; }
    static bool ge(const Rat& a, const Rat& b) { return a >= b; }
    static bool expanding(const Rat& t) { return t > Rat(1, 1000000000); }
    static bool close(const Rat& a, const Rat& b) { return a == b; }
};

template <class T>
void check_pivot(const SpectralProfile<T>& profile, int pivot) {
    if (profile.l.empty()) fail(ErrorCode::InvalidConfig, "profile has no l values");
    if (pivot < 0 || pivot >= static_cast<int>(profile.l.size()))
        fail(ErrorCode::InvalidConfig, "pivot out of range");
}

template <class T>
T expanding_denominator(const SpectralProfile<T>& profile, int pivot) {
    T t = profile.tau + profile.l[pivot];
    if (!Cmp<T>::expanding(t))
        fail(ErrorCode::NonExpandingDenominator,
             "tau_n + l_i must be positive at the pivot");
    return t;
}

template <class T>
T sum_l(const SpectralProfile<T>& profile) {
    T s(0);
    for (const T& x : profile.l) s += x;
    return s;
}

}  // namespace

template <class T>
IndexSets index_sets(const SpectralProfile<T>& profile, int pivot, bool need_gamma) {
    check_pivot(profile, pivot);
    if (need_gamma && !profile.h)
        fail(ErrorCode::MissingHProfile, "gamma set needs the lattice h profile");
    IndexSets out;
    out.pivot = pivot;
    const int d = static_cast<int>(profile.l.size());
    const T threshold = profile.tau + profile.l[pivot];
    for (int j = 0; j < d; ++j) {
        if (Cmp<T>::gt(profile.l[j], threshold)) out.k1.push_back(j);
        if (Cmp<T>::lt(profile.l[j], profile.l[pivot])) out.k2.push_back(j);
    }
    if (profile.h) {
        if (static_cast<int>(profile.h->size()) != d)
            fail(ErrorCode::InvalidConfig, "h length disagrees with l");
        out.has_gamma = true;
        for (int j = 0; j < d; ++j)
            if (Cmp<T>::ge((*profile.h)[j], threshold)) out.gamma.push_back(j);
    }
    return out;
}

template <class T>
T s_hat_n(const SpectralProfile<T>& profile, int pivot) {
    check_pivot(profile, pivot);
    T t = expanding_denominator(profile, pivot);
    IndexSets sets = index_sets(profile, pivot, false);
    T num = sum_l(profile);
    for (int j : sets.k2) num -= profile.l[j] - profile.l[pivot];
    return num / t;
}

template <class T>
T s_lower_n(const SpectralProfile<T>& profile, int pivot) {
    check_pivot(profile, pivot);
    T t = expanding_denominator(profile, pivot);
    IndexSets sets = index_sets(profile, pivot, false);
    T num = sum_l(profile);
    for (int j : sets.k2) num -= profile.l[j] - profile.l[pivot];
    for (int j : sets.k1) num += t - profile.l[j];
    return num / t;
}

template <class T>
T s_upper_n(const SpectralProfile<T>& profile, int pivot) {
    check_pivot(profile, pivot);
    T t = expanding_denominator(profile, pivot);
    IndexSets sets = index_sets(profile, pivot, true);
    T num = sum_l(profile);
    for (int j : sets.k2) num -= profile.l[j] - profile.l[pivot];
    for (int j : sets.gamma) num += t - (*profile.h)[j];
    return num / t;
}

template IndexSets index_sets<double>(const SpectralProfile<double>&, int, bool);
template IndexSets index_sets<Rat>(const SpectralProfile<Rat>&, int, bool);
template double s_hat_n<double>(const SpectralProfile<double>&, int);
template Rat s_hat_n<Rat>(const SpectralProfile<Rat>&, int);
template double s_lower_n<double>(const SpectralProfile<double>&, int);
template Rat s_lower_n<Rat>(const SpectralProfile<Rat>&, int);
template double s_upper_n<double>(const SpectralProfile<double>&, int);
template Rat s_upper_n<Rat>(const SpectralProfile<Rat>&, int);

namespace {

// Per-pivot minima of the three quantities for one profile.  Diagonal
// families get the upper value copied from the lower one, which is exact for
// them and skips the lattice work entirely.
BoundsRow row_minima(const SpectralProfile<double>& profile, bool diagonal) {
    BoundsRow row;
    row.n = profile.n;
    row.tau_n = profile.tau;
    const int d = static_cast<int>(profile.l.size());
    for (int p = 0; p < d; ++p) {
        double lo = s_lower_n(profile, p);
        double hat = s_hat_n(profile, p);
        double up = diagonal ? lo : s_upper_n(profile, p);
        if (p == 0 || lo < row.s_lower) {
            row.s_lower = lo;
            row.arg_lower = p + 1;
        }
        if (p == 0 || up < row.s_upper) {
            row.s_upper = up;
            row.arg_upper = p + 1;
        }
        if (p == 0 || hat < row.s_hat) {
            row.s_hat = hat;
            row.arg_hat = p + 1;
        }
    }
    return row;
}

std::string regime_tag(const BoundsReport& rep, bool diagonal) {
    if (diagonal) return "diagonal";
    bool coincide = std::abs(rep.s_lower - rep.s_hat) <= 1e-9 &&
                    std::abs(rep.s_upper - rep.s_hat) <= 1e-9;
    return coincide ? "coincide" : "generic";
}

void aggregate_tail(BoundsReport& rep, long n_lo, long n_hi) {
    const long start = tail_window_start(n_lo, n_hi);
    bool first = true;
    double lo_min = 0.0, up_min = 0.0, hat_min = 0.0;
    for (const BoundsRow& row : rep.rows) {
        if (row.n < start) continue;
        if (first || row.s_lower > rep.s_lower) {
            rep.s_lower = row.s_lower;
            rep.arg_lower = row.arg_lower;
        }
        if (first || row.s_upper > rep.s_upper) {
            rep.s_upper = row.s_upper;
            rep.arg_upper = row.arg_upper;
        }
        if (first || row.s_hat > rep.s_hat) {
            rep.s_hat = row.s_hat;
            rep.arg_hat = row.arg_hat;
        }
        lo_min = first ? row.s_lower : std::min(lo_min, row.s_lower);
        up_min = first ? row.s_upper : std::min(up_min, row.s_upper);
        hat_min = first ? row.s_hat : std::min(hat_min, row.s_hat);
        first = false;
    }
    rep.oscillation = std::max({rep.s_lower - lo_min, rep.s_upper - up_min,
                                rep.s_hat - hat_min});
}

BoundsReport analytic_bounds(const MatrixFamily& fam, const PsiSpec& psi, long horizon) {
    if (!generator_expanding(fam))
        fail(ErrorCode::UnsupportedAnalytic, "analytic mode needs an expanding generator");
    std::vector<double> moduli = generator_moduli(fam);
    SpectralProfile<double> limit;
    limit.n = 0;
    limit.tau = lower_order_at_infinity(psi, horizon).value;
    limit.l.resize(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) limit.l[i] = std::log(moduli[i]);
    Vec<double> h(limit.l.rbegin(), limit.l.rend());
    if (fam.kind == FamilyKind::ScaledPower)
        std::fill(h.begin(), h.end(), std::log(to_double(fam.scale)));
    limit.h = std::move(h);

    BoundsRow at_limit = row_minima(limit, false);
    BoundsReport rep;
    rep.analytic = true;
    rep.s_lower = at_limit.s_lower;
    rep.arg_lower = at_limit.arg_lower;
    rep.s_upper = at_limit.s_upper;
    rep.arg_upper = at_limit.arg_upper;
    rep.s_hat = at_limit.s_hat;
    rep.arg_hat = at_limit.arg_hat;
    rep.regime = regime_tag(rep, false);
    return rep;
}

}  // namespace

BoundsReport dimension_bounds(const MatrixFamily& fam, const PsiSpec& psi,
                              long n_lo, long n_hi, BoundsMode mode) {
    validate_family(fam);
    validate_psi(psi);
    if (n_lo < 1 || n_hi < n_lo)
        fail(ErrorCode::InvalidConfig, "need 1 <= n_lo <= n_hi");
    if (mode == BoundsMode::Analytic) return analytic_bounds(fam, psi, n_hi);

    if (n_hi > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "n range exceeds the family horizon");
    const bool diagonal = fam.kind == FamilyKind::Diagonal;
    BoundsReport rep;
    rep.rows.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n) {
        SpectralProfile<double> profile = spectral_profile(fam, psi, n);
        if (!diagonal) profile.h = h_profile(fam, n).h;
        rep.rows.push_back(row_minima(profile, diagonal));
    }
    aggregate_tail(rep, n_lo, n_hi);
    rep.regime = regime_tag(rep, diagonal);
    return rep;
}

template <class T>
void validate_dim_inputs(const DimInputs<T>& inp) {
    const std::size_t d = inp.u.size();
    if (d == 0) fail(ErrorCode::InvalidConfig, "dimensional-number inputs are empty");
    if (inp.v.size() != d || inp.v_inf.size() != d || inp.delta.size() != d)
        fail(ErrorCode::InvalidConfig, "dimensional-number input sizes disagree");
    for (std::size_t i = 0; i < d; ++i) {
        if (!(inp.u[i] > T(0)))
            fail(ErrorCode::InvalidConfig, "u entries must be positive");
        if (!inp.v_inf[i] && inp.v[i] < inp.u[i])
            fail(ErrorCode::InvalidConfig, "finite v entries must dominate u");
        if (!(inp.delta[i] > T(0)))
            fail(ErrorCode::InvalidConfig, "delta weights must be positive");
    }
}

template <class T>
DimInputs<T> make_dim_inputs(Vec<T> u, Vec<T> v, std::vector<bool> v_inf, Vec<T> delta) {
    DimInputs<T> inp;
    inp.u = std::move(u);
    inp.v = std::move(v);
    inp.v_inf = std::move(v_inf);
    inp.delta = std::move(delta);
    if (inp.v_inf.empty()) inp.v_inf.assign(inp.u.size(), false);
    if (inp.delta.empty()) inp.delta.assign(inp.u.size(), T(1));
    validate_dim_inputs(inp);
    return inp;
}

namespace {

// Shared kernel: partition the coordinates at threshold a, evaluate the sum
// with denominator b.  s_dimnumber and s_frak use a == b; the breakpoint
// identity freezes a at one breakpoint while b moves to the next.
template <class T>
T frak_sum(const DimInputs<T>& inp, const T& a, const T& b) {
    T s(0);
    for (std::size_t k = 0; k < inp.u.size(); ++k) {
        if (inp.u[k] > a) {
            s += inp.delta[k];
        } else if (!inp.v_inf[k] && inp.v[k] <= a) {
            s += inp.delta[k] * (T(1) - (inp.v[k] - inp.u[k]) / b);
        } else {
            s += inp.delta[k] * inp.u[k] / b;
        }
    }
    return s;
}

template <class T>
void require_finite(const DimInputs<T>& inp) {
    for (bool inf : inp.v_inf)
        if (inf) fail(ErrorCode::InvalidConfig, "check requires all v entries finite");
}

template <class T>
std::vector<T> sorted_breakpoints(const DimInputs<T>& inp) {
    std::vector<T> bps(inp.u.begin(), inp.u.end());
    bps.insert(bps.end(), inp.v.begin(), inp.v.end());
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    return bps;
}

}  // namespace

template <class T>
T s_dimnumber(const DimInputs<T>& inp, int i) {
    validate_dim_inputs(inp);
    if (i < 0 || i >= static_cast<int>(inp.u.size()))
        fail(ErrorCode::InvalidConfig, "coordinate out of range");
    if (inp.v_inf[static_cast<std::size_t>(i)]) {
        T s(0);
        for (std::size_t k = 0; k < inp.u.size(); ++k)
            if (!inp.v_inf[k]) s += inp.delta[k];
        return s;
    }
    const T& vi = inp.v[static_cast<std::size_t>(i)];
    return frak_sum(inp, vi, vi);
}

template <class T>
T s_frak(const DimInputs<T>& inp, const T& a) {
    validate_dim_inputs(inp);
    if (!(a > T(0))) fail(ErrorCode::InvalidBreakpoint, "breakpoint must be positive");
    return frak_sum(inp, a, a);
}

template <class T>
bool min_equivalence_check(const DimInputs<T>& inp) {
    validate_dim_inputs(inp);
    require_finite(inp);
    std::vector<T> bps = sorted_breakpoints(inp);
    T lhs = s_frak(inp, bps.front());
    for (std::size_t k = 1; k < bps.size(); ++k) lhs = std::min(lhs, s_frak(inp, bps[k]));
    T rhs = s_dimnumber(inp, 0);
    for (int i = 1; i < static_cast<int>(inp.u.size()); ++i)
        rhs = std::min(rhs, s_dimnumber(inp, i));
    return Cmp<T>::close(lhs, rhs);
}

template <class T>
bool breakpoint_identity_check(const DimInputs<T>& inp) {
    validate_dim_inputs(inp);
    require_finite(inp);
    std::vector<T> bps = sorted_breakpoints(inp);
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        T frozen = frak_sum(inp, bps[k], bps[k + 1]);
        T direct = frak_sum(inp, bps[k + 1], bps[k + 1]);
        if (!Cmp<T>::close(frozen, direct)) return false;
    }
    return true;
}

template void validate_dim_inputs<double>(const DimInputs<double>&);
template void validate_dim_inputs<Rat>(const DimInputs<Rat>&);
template DimInputs<double> make_dim_inputs<double>(Vec<double>, Vec<double>,
                                                   std::vector<bool>, Vec<double>);
template DimInputs<Rat> make_dim_inputs<Rat>(Vec<Rat>, Vec<Rat>, std::vector<bool>,
                                             Vec<Rat>);
template double s_dimnumber<double>(const DimInputs<double>&, int);
template Rat s_dimnumber<Rat>(const DimInputs<Rat>&, int);
template double s_frak<double>(const DimInputs<double>&, const double&);
template Rat s_frak<Rat>(const DimInputs<Rat>&, const Rat&);
template bool min_equivalence_check<double>(const DimInputs<double>&);
template bool min_equivalence_check<Rat>(const DimInputs<Rat>&);
template bool breakpoint_identity_check<double>(const DimInputs<double>&);
template bool breakpoint_identity_check<Rat>(const DimInputs<Rat>&);

}  // namespace hdim
