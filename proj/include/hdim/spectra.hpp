/**
 * spectra.hpp
 *
 * Per-n spectral data: the normalized log singular values
 *     l_{n,i} = (1/n) ln sigma_i(A_n)   (ascending),
 * the decay exponent tau_n of psi, and optionally the normalized lattice
 * exponents h_{n,i} filled in by the lattice module.  Also the accumulation
 * set of the profile sequence, either in closed form for power-like families
 * or by clustering computed profiles.
 */
#pragma once

#include <optional>
#include <vector>

#include "hdim/family.hpp"
#include "hdim/psi.hpp"

namespace hdim {

template <class T>
struct SpectralProfile {
    long n = 0;
    T tau{};                    // tau_n = -(1/n) ln psi(n)
    Vec<T> l;                   // ascending normalized log singular values
    std::optional<Vec<T>> h;    // descending normalized lattice exponents, if computed
};

/// Double-precision profile.  Singular values are computed with a
/// high-precision symmetric eigensolve on the exact Gram matrix, so entries
/// whose magnitudes span hundreds of orders remain accurate; diagonal
/// families bypass the eigensolve entirely.
SpectralProfile<double> spectral_profile(const MatrixFamily& fam, const PsiSpec& psi, long n);

/// Exact rational profile.  Available when both the log singular values and
/// tau_n are rational by construction: log-scale diagonal families together
/// with exponential psi.  Empty otherwise.
std::optional<SpectralProfile<Rat>> spectral_profile_exact(const MatrixFamily& fam,
                                                           const PsiSpec& psi, long n);

struct AccumulationSet {
    bool analytic = false;
    std::vector<Vec<double>> points;   // each point is an ascending vector in R^d
    std::vector<int> cluster_sizes;    // clustered mode: profiles merged per point
    double max_residual = 0.0;         // clustered mode: worst distance to a centroid
};

enum class AccumulationMode { Analytic, Clustered };

/// Accumulation set of (l_{n,1}, ..., l_{n,d}).  Analytic mode requires a
/// power-like family with every generator modulus > 1 and returns the
/// singleton {(ln|lambda_1|, ..., ln|lambda_d|)}; clustered mode computes
/// profiles for n in [n_lo, n_hi], drops n below the burn-in, and merges the
/// rest by single-linkage at the given radius.
AccumulationSet accumulation_set(const MatrixFamily& fam, const PsiSpec& psi,
                                 AccumulationMode mode, long n_lo, long n_hi,
                                 double merge_radius = 1e-3, long burn_in = 10);

/// Least n0 in [n_lo, n_hi] from which every profile stays within eps of the
/// analytic limit point, sup-norm.  Requires analytic mode to be available.
/// Empty if no such n0 exists in the range.
std::optional<long> stabilization_index(const MatrixFamily& fam, const PsiSpec& psi,
                                        double eps, long n_lo, long n_hi);

}  // namespace hdim
