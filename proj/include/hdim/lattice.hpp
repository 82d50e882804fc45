/**
 * lattice.hpp
 *
 * Exact lattice computations for Lambda_n = A_n^{-1} Z^d: covolume,
 * successive minima with witnesses, a reduced basis attaining the minima up
 * to a reported dimension factor, and the normalized exponent profile
 * h_{n,i} = -(1/n) ln m_i(Lambda_n).
 *
 * Everything runs in exact rational arithmetic: LLL reduction (delta = 0.99)
 * followed by Schnorr-Euchner style enumeration with exact Gram data.  The
 * k-th minimum is found as the shortest vector outside the span of the
 * witnesses found so far; the basis is maintained so that this span is
 * generated by its first k-1 columns, letting the enumeration prune that
 * subtree instead of wading through its multiples.  Floating-point bases are
 * embedded exactly into the rationals (every double is rational), so the
 * same pipeline serves both entry points.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdim/family.hpp"
#include "hdim/matrix.hpp"
#include "hdim/numeric.hpp"

namespace hdim {

struct LatticeData {
    Mat<Rat> basis;      // columns generate the lattice
    Rat covolume{0};     // |det basis|

    // Filled by successive_minima:
    Vec<Rat> minima_sq;                    // ascending squared Euclidean minima
    Vec<double> minima;                    // ascending Euclidean minima
    std::vector<Vec<BigInt>> witness_coeffs;  // integer coordinates in `basis`
    std::vector<Vec<Rat>> witnesses;          // ambient witness vectors

    // Filled by reduced_basis:
    std::optional<Mat<Rat>> reduced;  // genuine basis, |v_1| = m_1
    double reduction_factor = 1.0;    // K with |v_k| <= K m_k and |pi_k(v_k)| >= m_k / K

    bool has_minima() const { return !minima_sq.empty(); }
};

/// Lambda = A^{-1} Z^d: basis = A^{-1}, covolume = 1/|det A|.
LatticeData lattice_from_matrix(const Mat<Rat>& a);
LatticeData lattice_from_matrix(const Mat<double>& a);

/// Lattice described directly by its generating columns.
LatticeData lattice_from_basis(const Mat<Rat>& basis);

/// Ascending successive minima with independent witnesses, exact.  d <= 6.
/// Throws BudgetExceeded when the enumeration visits more than node_budget
/// nodes (the message reports how many minima were certified before that).
void successive_minima(LatticeData& lat, long node_budget = 4'000'000);

/// Basis v_1..v_d of the lattice with |v_1| = m_1 and |v_k| within the
/// reported factor of m_k; Gram-Schmidt projections stay above m_k divided
/// by the same factor.  Requires successive_minima to have run.
void reduced_basis(LatticeData& lat);

/// Exhaustive scan of coefficient vectors in [-box_bound, box_bound]^d,
/// d <= 3.  Returns ascending squared minima restricted to the box, plus a
/// sufficiency certificate: the box provably contains witnesses of the true
/// minima.  Throws InsufficientBox when the certificate fails, BudgetExceeded
/// when the box holds more than two million candidates.
Vec<Rat> brute_force_minima_sq(const LatticeData& lat, long box_bound);

/// All integer coefficient vectors c with |basis*c - target|^2 <= radius_sq,
/// decided exactly.  The basis is LLL-reduced internally; the returned
/// coefficients refer to the original columns.  Throws BudgetExceeded once
/// more than max_points vectors qualify.
std::vector<Vec<BigInt>> lattice_points_in_ball(const Mat<Rat>& basis, const Vec<Rat>& target,
                                                const Rat& radius_sq, long max_points);

/// Minkowski second-theorem sandwich constants [c_d, C_d] for the product
/// m_1...m_d / covolume, from the volume of the Euclidean unit ball.
struct MinkowskiBounds {
    double lower = 0.0;   // 2^d / (d! vol B^d)
    double upper = 0.0;   // 2^d / vol B^d
    double first_minimum_factor = 0.0;  // m_1 <= factor * covol^{1/d}
};
MinkowskiBounds minkowski_bounds(int d);

/// Normalized lattice exponents h_{n,1..d} for Lambda_n = A_n^{-1} Z^d,
/// descending, paired with ascending minima.  Closed forms serve the
/// diagonal and scaled-power kinds; everything else goes through exact
/// enumeration, split across diagonal blocks when A_n decomposes.
struct HProfile {
    Vec<double> h;        // descending
    Vec<Rat> minima_sq;   // ascending; empty when minima are irrational
};
HProfile h_profile(const MatrixFamily& fam, long n);

}  // namespace hdim
