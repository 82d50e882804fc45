/**
 * family.hpp
 *
 * Matrix sequences A_n.  Every family is stored exactly (rational entries,
 * or rational log-exponents for diagonal families given on the log scale),
 * so that downstream spectral and lattice work can choose between exact
 * rational arithmetic and high-precision floating point per call site.
 */
#pragma once

#include <vector>

#include "hdim/eigen_sym.hpp"
#include "hdim/matrix.hpp"
#include "hdim/numeric.hpp"

namespace hdim {

enum class FamilyKind {
    ExplicitList,        // finitely many matrices given outright
    Power,               // A_n = A^n
    PowerMinusIdentity,  // A_n = A^n - I
    ScaledPower,         // A_n = (lambda A)^n with integer lambda, |det A| = 1
    Diagonal,            // A_n = diag(d_{n,1}, ..., d_{n,d})
    Jordan,              // A_n = J^n for a block-diagonal Jordan-form J
};

struct JordanBlockSpec {
    Rat lambda;
    int size = 1;
};

struct MatrixFamily {
    FamilyKind kind = FamilyKind::Power;
    int d = 0;

    std::vector<Mat<Rat>> matrices;       // ExplicitList: A_1, A_2, ...
    Mat<Rat> base;                        // Power / PowerMinusIdentity / ScaledPower
    BigInt scale{1};                      // ScaledPower factor lambda >= 2
    std::vector<Vec<Rat>> diag_entries;   // Diagonal: row n-1 holds the d entries of A_n
    bool diag_log_scale = false;          // Diagonal: entries are exponents q, A_n = diag(e^q)
    std::vector<JordanBlockSpec> blocks;  // Jordan

    static MatrixFamily explicit_list(std::vector<Mat<Rat>> ms);
    static MatrixFamily power(Mat<Rat> a);
    static MatrixFamily power_minus_identity(Mat<Rat> a);
    static MatrixFamily scaled_power(BigInt lambda, Mat<Rat> a);
    static MatrixFamily diagonal(std::vector<Vec<Rat>> entries, bool log_scale = false);
    static MatrixFamily jordan(std::vector<JordanBlockSpec> bs);
};

/// Structural checks: dimensions agree, ScaledPower has |det A| = 1 and an
/// integer scale >= 2, Jordan blocks tile d, diagonal entries are nonzero.
/// Throws InvalidConfig on violation.
void validate_family(const MatrixFamily& fam);

/// Largest n for which the family can produce a matrix (LONG_MAX for the
/// closed kinds, list/table length otherwise).
long family_horizon(const MatrixFamily& fam);

/// True when A_n has exact rational entries (everything except log-scale
/// diagonal families).
bool has_exact_matrix(const MatrixFamily& fam);

/// A_n with exact rational entries.  Throws SingularMatrix if A_n is not
/// invertible, NumericalFailure for log-scale diagonal families.
Mat<Rat> generate_matrix_exact(const MatrixFamily& fam, long n);

/// A_n in double precision (defined for every kind; exact kinds round).
Mat<double> generate_matrix(const MatrixFamily& fam, long n);

/// The block-diagonal matrix J assembled from Jordan block specs.
Mat<Rat> jordan_base(const std::vector<JordanBlockSpec>& blocks);

/// Ascending eigenvalue moduli of the generating matrix for the power-like
/// kinds (base for Power / PowerMinusIdentity, lambda*base for ScaledPower,
/// J for Jordan).  Throws UnsupportedAnalytic for list and diagonal kinds.
std::vector<double> generator_moduli(const MatrixFamily& fam);

/// True when every generator modulus exceeds 1 (tolerance 1e-9); power-like
/// kinds only.
bool generator_expanding(const MatrixFamily& fam);

}  // namespace hdim
