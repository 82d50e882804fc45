/**
 * dimension.hpp
 *
 * Dimension quantities built from spectral profiles: the pivot-indexed
 * comparison sets, the three per-n values (lower, upper, hat), their
 * aggregated bounds over an n-range or at the analytic limit, and the
 * weighted dimensional numbers s(u,v,i) / s_frak(u,v,a) together with their
 * breakpoint identities.
 *
 * Conventions.  Pivots passed to the per-profile functions are 0-based
 * positions into the ascending l vector; reported argmin indices are 1-based.
 * Comparisons against thresholds are exact for rational profiles; for double
 * profiles a value within 1e-12 of a threshold counts as equal and is
 * therefore excluded from strict sets.
 */
#pragma once

#include <string>
#include <vector>

#include "hdim/family.hpp"
#include "hdim/psi.hpp"
#include "hdim/spectra.hpp"

namespace hdim {

/// Comparison sets for one pivot.  With t = tau + l[pivot]:
///   k1    = { j : l[j] > t }        (strict)
///   k2    = { j : l[j] < l[pivot] } (strict)
///   gamma = { j : h[j] >= t }       (loose; needs the h profile)
struct IndexSets {
    int pivot = 0;
    std::vector<int> k1;
    std::vector<int> k2;
    std::vector<int> gamma;
    bool has_gamma = false;
};

/// Builds the comparison sets for one pivot.  gamma is filled whenever the
/// profile carries h; requesting it without h throws MissingHProfile.
template <class T>
IndexSets index_sets(const SpectralProfile<T>& profile, int pivot, bool need_gamma = false);

/// The three per-n values at one pivot.  With t = tau + l[pivot], S = sum of
/// all l[j], and C2 = sum over k2 of (l[j] - l[pivot]):
///   s_hat_n   = (S - C2) / t
///   s_lower_n = (S - C2 + sum over k1 of (t - l[j])) / t
///   s_upper_n = (S - C2 + sum over gamma of (t - h[j])) / t
/// All three require t > 1e-9 (exactly > 1/10^9 in rational mode) and throw
/// NonExpandingDenominator otherwise; s_upper_n throws MissingHProfile when
/// the profile has no h.
template <class T>
T s_lower_n(const SpectralProfile<T>& profile, int pivot);
template <class T>
T s_upper_n(const SpectralProfile<T>& profile, int pivot);
template <class T>
T s_hat_n(const SpectralProfile<T>& profile, int pivot);

enum class BoundsMode { Numeric, Analytic };

/// One row of the numeric sweep: the per-pivot minima at a single n with
/// their 1-based argmin pivots.
struct BoundsRow {
    long n = 0;
    double tau_n = 0.0;
    double s_lower = 0.0;
    int arg_lower = 0;
    double s_upper = 0.0;
    int arg_upper = 0;
    double s_hat = 0.0;
    int arg_hat = 0;
};

struct BoundsReport {
    std::vector<BoundsRow> rows;  // empty in analytic mode

    // Aggregates: tail-window maxima of the row minima (numeric mode) or the
    // values at the limit profile (analytic mode), with 1-based argmins.
    double s_lower = 0.0;
    double s_upper = 0.0;
    double s_hat = 0.0;
    int arg_lower = 0;
    int arg_upper = 0;
    int arg_hat = 0;

    std::string regime;        // "diagonal", "coincide", or "generic"
    double oscillation = 0.0;  // widest tail-window spread among the three minima
    bool analytic = false;
};

/// Sweeps n over [n_lo, n_hi] (numeric mode) or substitutes the limit profile
/// of a power-like expanding family (analytic mode).  Numeric aggregates take
/// the maximum over the trailing 30% of the range; the oscillation diagnostic
/// reports the widest max-min spread of the three quantities over that
/// window.  Diagonal families short-circuit the upper value to the lower one,
/// which is exact for them.  Analytic mode uses the log generator moduli as
/// the limit l, their descending mirror as the limit h (the scale logarithm
/// for scaled-power families), and the decay rate of psi at infinity as tau;
/// families without that structure throw UnsupportedAnalytic.
BoundsReport dimension_bounds(const MatrixFamily& fam, const PsiSpec& psi,
                              long n_lo, long n_hi, BoundsMode mode);

/// Inputs of the weighted dimensional numbers: exponent pairs u[i] <= v[i]
/// (v[i] may be infinite, flagged in v_inf, in which case v[i] is ignored)
/// and positive weights delta.
template <class T>
struct DimInputs {
    Vec<T> u;
    Vec<T> v;
    std::vector<bool> v_inf;
    Vec<T> delta;
};

/// Convenience assembly; empty v_inf means all finite, empty delta means all
/// weights 1.  Validates before returning.
template <class T>
DimInputs<T> make_dim_inputs(Vec<T> u, Vec<T> v, std::vector<bool> v_inf = {},
                             Vec<T> delta = {});

/// Size agreement, u[i] > 0, v[i] >= u[i] on finite coordinates, delta > 0.
/// Throws InvalidConfig.
template <class T>
void validate_dim_inputs(const DimInputs<T>& inp);

/// Dimensional number at coordinate i (0-based).  Finite v[i]: partition the
/// coordinates into K1 = {k : u[k] > v[i]} (weight delta[k]), K2 = {finite k
/// not in K1 with v[k] <= v[i]} (weight delta[k] (1 - (v[k]-u[k])/v[i])), and
/// the rest (weight delta[k] u[k]/v[i]), and sum.  Infinite v[i]: the sum of
/// delta over finite coordinates.  Comparisons are plain (no tolerance).
template <class T>
T s_dimnumber(const DimInputs<T>& inp, int i);

/// Same sum with the pivot value v[i] replaced by a free breakpoint a > 0
/// (a <= 0 throws InvalidBreakpoint).  At a = v[i] it reproduces
/// s_dimnumber(inp, i).
template <class T>
T s_frak(const DimInputs<T>& inp, const T& a);

/// Checks that the minimum of s_frak over the breakpoints {u[k]} union {v[k]}
/// equals the minimum of s_dimnumber over coordinates.  Exact in rational
/// mode, tolerance 1e-12 in double mode.  Requires all v finite.
template <class T>
bool min_equivalence_check(const DimInputs<T>& inp);

/// Checks that between consecutive sorted breakpoints t < t', evaluating the
/// s_frak sum with the partition frozen at t but denominator t' reproduces
/// s_frak(t').  Requires all v finite.
template <class T>
bool breakpoint_identity_check(const DimInputs<T>& inp);

}  // namespace hdim
