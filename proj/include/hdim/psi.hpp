/**
 * psi.hpp
 *
 * The approximation-rate function psi: a positive nonincreasing sequence
 * given either as an exponential e^(-tau*n), a power law n^(-alpha), or an
 * explicit table.  Evaluation is always through logarithms where possible so
 * that deep tails neither underflow nor lose the exponents the rest of the
 * pipeline feeds on.
 */
#pragma once

#include <optional>
#include <vector>

#include "hdim/numeric.hpp"

namespace hdim {

enum class PsiKind { Exponential, PowerLaw, Geometric, Table };

struct PsiSpec {
    PsiKind kind = PsiKind::Exponential;
    Rat tau{0};               // Exponential decay rate, >= 0
    Rat alpha{0};             // PowerLaw exponent, > 0
    Rat factor{1};            // Geometric: psi(n) = factor * ratio^(-n)
    Rat ratio{1};             // Geometric ratio, >= 1 (1 gives a constant psi)
    std::vector<Rat> table;   // Table values psi(1..N), positive, nonincreasing

    static PsiSpec exponential(Rat tau_rate) {
        PsiSpec p;
        p.kind = PsiKind::Exponential;
        p.tau = std::move(tau_rate);
        return p;
    }
    static PsiSpec power_law(Rat a) {
        PsiSpec p;
        p.kind = PsiKind::PowerLaw;
        p.alpha = std::move(a);
        return p;
    }
    static PsiSpec geometric(Rat factor, Rat ratio) {
        PsiSpec p;
        p.kind = PsiKind::Geometric;
        p.factor = std::move(factor);
        p.ratio = std::move(ratio);
        return p;
    }
    static PsiSpec table_values(std::vector<Rat> vals) {
        PsiSpec p;
        p.kind = PsiKind::Table;
        p.table = std::move(vals);
        return p;
    }
};

/// Throws InvalidPsi unless the spec defines a positive nonincreasing sequence.
void validate_psi(const PsiSpec& psi);

/// psi(n).  May underflow to zero for very deep exponential tails; callers
/// that care about exponents should use log_psi.
double psi_value(const PsiSpec& psi, long n);

/// ln psi(n), computed without forming psi(n).
double log_psi(const PsiSpec& psi, long n);

/// tau_n = -(1/n) ln psi(n).
double tau_of_n(const PsiSpec& psi, long n);

/// Exact tau_n, available when the log of psi(n) is rational by construction
/// (the exponential kind).  Empty otherwise.
std::optional<Rat> tau_of_n_exact(const PsiSpec& psi, long n);

struct LowerOrder {
    double value = 0.0;
    bool tail_monotone = true;  // diagnostic: was -ln psi(n)/n monotone on the probed tail
};

/// Lower order at infinity: liminf of -ln psi(n)/n.  Exact for the closed
/// kinds; for tables, the minimum over n in [horizon/2, horizon] plus a
/// monotonicity diagnostic.
LowerOrder lower_order_at_infinity(const PsiSpec& psi, long horizon);

}  // namespace hdim
