/**
 * empirical.hpp
 *
 * Desk-scale empirical checks: exact enumeration of the preimage sets
 * F_n(y) = {x in [0,1)^d : A_n x = y (mod 1)}, membership in the target sets
 * W_n(psi), dyadic box-counting with a depth-matched stage protocol, the
 * fiber interval structure of the planar counterexample families, an exact
 * gap certificate for quadratic irrational directions, and the covering
 * count that backs the upper-bound machinery.
 *
 * Everything here is deterministic: exact rational or integer arithmetic
 * wherever a count or a certificate is produced, double precision only for
 * reported magnitudes and fitted slopes.
 */
#pragma once

#include <optional>
#include <vector>

#include "hdim/family.hpp"
#include "hdim/lattice.hpp"
#include "hdim/matrix.hpp"
#include "hdim/numeric.hpp"
#include "hdim/psi.hpp"

namespace hdim {

// ─────────────────────────────────────────────────────────────────────────────
// Preimage sets and membership
// ─────────────────────────────────────────────────────────────────────────────

struct PreimageSet {
    long n = 0;
    Vec<Rat> y;
    std::vector<Vec<Rat>> points;       // lexicographically sorted; filled when materialized
    BigInt count{0};                    // exact cardinality of F_n(y)
    std::optional<BigInt> exact_count;  // |det A_n| when A_n has integer entries
    bool materialized = false;
};

/// All x in [0,1)^d with A_n x = y (mod 1), exactly.  Diagonal and
/// scaled-power families use per-coordinate closed forms; other integer
/// stage matrices stream the fundamental domain of A_n^{-1} Z^d through a
/// triangular basis whose diagonal gives the count independently of the
/// determinant; the remaining exact kinds enumerate the integer translates
/// inside the ball circumscribing A_n [0,1)^d and filter back through
/// A_n^{-1}.  The count is always exact; the point list is materialized only
/// while it stays desk-sized.  Throws BudgetExceeded when the count exceeds
/// the budget.
PreimageSet enumerate_preimages(const MatrixFamily& fam, long n, const Vec<Rat>& y,
                                long long budget = 10'000'000);

/// True iff the torus distance from A_n x to y is below psi(n), where the
/// torus norm combines per-coordinate distances to the nearest integer in
/// the Euclidean way.
bool wn_membership(const Vec<double>& x, const MatrixFamily& fam, const PsiSpec& psi, long n,
                   const Vec<double>& y);

// ─────────────────────────────────────────────────────────────────────────────
// Dyadic box counting
// ─────────────────────────────────────────────────────────────────────────────

struct BoxCountEstimate {
    std::vector<int> depths;        // usable dyadic depths, increasing
    std::vector<long long> counts;  // cells of side 2^-p meeting the matched stage
    std::vector<long> matched_n;    // stage n whose thickness matches each depth
    double slope = 0.0;             // least-squares slope of ln N against ln 2^p
    double residual = 0.0;          // rms residual of that fit
    long n_lo = 0;                  // stage window that was searched
    long n_hi = 0;
};

/// Box-counting estimate of the dimension of the limsup target set.  A fixed
/// union over a finite stage window is dominated by its coarsest stages, so
/// instead each dyadic depth p is paired with the stage n whose ellipsoid
/// thickness psi(n) e^{-n l_max} is nearest to 2^-p; depths with no stage
/// within half a dyadic step, with a stage too large to enumerate, or whose
/// counts are trivial or saturated are dropped.  Requires d <= 2 and at
/// least two usable depths (InsufficientResolution otherwise); the total
/// cell count across requested depths must stay within cell_budget
/// (BudgetExceeded otherwise).
BoxCountEstimate box_count_dimension(const MatrixFamily& fam, const PsiSpec& psi, const Vec<Rat>& y,
                                     long n_lo, long n_hi, int depth_lo, int depth_hi,
                                     long long cell_budget = 100'000'000);

// ─────────────────────────────────────────────────────────────────────────────
// Fiber structure of the planar counterexample families
// ─────────────────────────────────────────────────────────────────────────────

struct FiberInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct FiberStructure {
    double x = 0.0;  // fiber abscissa
    long n = 0;
    std::vector<FiberInterval> intervals;  // materialized mode: sorted by left endpoint
    double min_gap = 0.0;   // materialized: least gap between consecutive intervals;
                            // summary: certified lower bound on that gap
    long long count = 0;    // number of intervals kept by the length filter
    bool materialized = false;
    double min_len = 0.0;       // materialized: actual extremes; summary: certified bounds
    double max_len = 0.0;
    double sin_alpha = 0.0;     // sine of the angle between the long axis and the fiber
    double length_scale = 0.0;  // e^{-n (l2 + tau_n)}, the interval length unit
    double gap_scale = 0.0;     // e^{-n (l2 - tau_n)}, the expected gap unit
};

/// Intersections of the stage-n ellipsoids of the family A_n = (lambda A)^n
/// with the vertical fiber {x} x [0,1), keeping those of clipped length at
/// least half the length unit.  A must be a symmetric integer matrix with
/// |det A| = 1, no eigenvalue of modulus one, lambda a positive integer with
/// lambda * m_1 > 1, and tau_n must lie in (0, (l2 - l1)/2); violations
/// throw InvalidCounterexampleFamily.  When the interval count fits the
/// budget the intervals are materialized and the gap is measured; otherwise
/// the same counting rule runs arithmetically and the gap is certified from
/// below by the exact lattice structure of the interval centers.
FiberStructure fiber_intervals(const BigInt& lambda, const Mat<Rat>& a, const Rat& x, long n,
                               const PsiSpec& psi, long long budget = 4'000'000);

// ─────────────────────────────────────────────────────────────────────────────
// Gap certificate for quadratic irrational directions
// ─────────────────────────────────────────────────────────────────────────────

/// A real quadratic irrational slope (p + q sqrt(d)) / r.
struct QuadSlope {
    BigInt p{0};
    BigInt q{0};
    BigInt r{1};
    BigInt d{0};
};

/// Verifies that every nonzero integer point in the bounding box of the
/// segment {z + t (1, beta)/sqrt(1+beta^2) : |t| <= C M} stays at distance
/// greater than 1/M from the line through z with slope beta.  The constant C
/// and the admissible threshold M0 are derived from the minimal polynomial
/// of beta; M below M0 throws BelowThreshold, and a rational or degenerate
/// slope throws InvalidConfig.  All distance comparisons are exact in the
/// quadratic field.
bool liouville_gap_check(const QuadSlope& beta, long m, long zx, long zy);

// ─────────────────────────────────────────────────────────────────────────────
// Covering counts
// ─────────────────────────────────────────────────────────────────────────────

struct CoveringCount {
    double formula = 0.0;       // product form of the covering estimate
    double constructive = 0.0;  // translates used by the lexicographic sweep
    double ratio = 0.0;         // constructive / formula
    bool deduplicated = false;  // true when shared translates were merged exactly
    int pivot = 0;              // 1-based index k the cover was built for
};

/// Number of translated parallelepipeds of side 2 e^{-n (tau_n + l_{n,k})},
/// built on the reduced lattice basis, needed to cover the stage-n target
/// set.  The formula value multiplies e^{n(l_k - l_i)} over i with l_i < l_k,
/// the full product of e^{n l_i}, and m_i(Lambda_n)/r_{n,k} over the indices
/// with h_i >= tau_n + l_k; the constructive count sweeps every ellipsoid and
/// either merges translate indices exactly (within budget) or adds up the
/// per-ellipsoid boxes.  Requires d <= 3.
CoveringCount covering_count(const MatrixFamily& fam, const PsiSpec& psi, long n, int k,
                             long long budget = 10'000'000);

}  // namespace hdim
