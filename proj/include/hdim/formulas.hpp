/**
 * formulas.hpp
 *
 * Closed-form dimension values for the structured families: diagonalizable
 * generators, the hat variant, Jordan-block generators, the symmetric 2x2
 * counterexample construction, the 3x3 block example with its four tau
 * regimes, and the one-dimensional sequence case with its series-threshold
 * cross-check.
 */
#pragma once

#include <vector>

#include "hdim/family.hpp"
#include "hdim/matrix.hpp"
#include "hdim/numeric.hpp"
#include "hdim/psi.hpp"

namespace hdim {

/// min over pivots i (1-based count) of
///   [ i*l_i - sum_{j : l_j > tau + l_i} (l_j - l_i - tau)
///         + sum_{j > i} l_j ] / (tau + l_i)
/// with l = ln(moduli) ascending.  Requires every modulus > 1 (NotExpanding
/// otherwise) and tau >= 0.
double formula_diagonalizable(std::vector<double> eigen_moduli, double tau);

/// min over pivots of [ sum_j l_j - sum_{j : l_j < l_i} (l_j - l_i) ] /
/// (tau + l_i); the hat value, insensitive to the lattice profile.
double formula_hat(std::vector<double> eigen_moduli, double tau);

/// Jordan-block generator value: per block pivot i,
///   sum over K1 of n_j + [ sum over K2 of n_j l_i + sum over K3 of n_j l_j ]
///     / (l_i + tau)
/// with K1 = {j : l_j > l_i + tau}, K2 = {j : |lambda_j| < |lambda_i|}, K3
/// the rest, l_j = ln|lambda_j|; minimized over blocks.
double formula_jordan(const std::vector<JordanBlockSpec>& blocks, double tau);

/// Hat value of the scaled family (lambda A)^n for a symmetric unimodular
/// integer 2x2 generator with no unit eigenvalue.  Validates those
/// hypotheses (InvalidCounterexampleFamily) and evaluates formula_hat on the
/// moduli of lambda A.
double formula_counterexample(const BigInt& lambda, const Mat<Rat>& a, double tau);

/// Dimension value of the 3x3 block family diag(B, k) with
/// B = [[10,5],[5,5]]: the four-regime piecewise minimum in tau with
/// l1, l2 the log moduli of B and l3 = ln k.  Requires k > lambda_2^{3/2}
/// (HypothesisViolated otherwise) and tau >= 0.
double formula_example1(long k, double tau);

/// One-dimensional sequences a_n for the scalar case.
enum class SeqKind {
    Geometric,   // a_n = coeff * base^n
    Polynomial,  // a_n = coeff * n^degree
};

struct SeqSpec {
    SeqKind kind = SeqKind::Geometric;
    Rat coeff{1};
    Rat base{2};     // Geometric growth base, > 1
    int degree = 1;  // Polynomial degree, >= 1

    static SeqSpec geometric(Rat coeff, Rat base);
    static SeqSpec polynomial(Rat coeff, int degree);
};

/// a_n and ln a_n for n >= 1.
double seq_value(const SeqSpec& seq, long n);
double log_seq(const SeqSpec& seq, long n);

struct Formula1D {
    double value = 0.0;
    bool exact = false;             // closed form, not a tail-window estimate
    bool lower_bound_only = false;  // growth rate alpha = 0: value bounds from below
};

/// limsup over the tail window of ln a_n / (ln a_n - ln psi(n)), capped at 1.
/// Exact closed form ln(base)/(ln(base) + tau) when the sequence is geometric
/// and psi decays exponentially or geometrically.  Polynomial sequences have
/// growth rate zero and the result is flagged lower_bound_only.
Formula1D formula_1d(const SeqSpec& seq, const PsiSpec& psi, long horizon);

struct CriticalCheck {
    double formula = 0.0;   // formula_1d value
    double critical = 0.0;  // bisected series threshold
    bool agree = false;     // within 0.02
};

/// Locates inf{s : sum_n a_n (psi(n)/a_n)^s converges} by bisection on
/// s in [0, 1.5], classifying each candidate via the fitted growth slope of
/// the log summands over the tail window, and compares with formula_1d.
/// Throws Inconclusive when the classification cannot separate (growth rate
/// zero, or no sign change over the bracket).
CriticalCheck critical_exponent_check(const SeqSpec& seq, const PsiSpec& psi, long horizon);

}  // namespace hdim
