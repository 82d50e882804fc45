#include "hdim/psi.hpp"

#include <cmath>

namespace hdim {

void validate_psi(const PsiSpec& psi) {
    switch (psi.kind) {
        case PsiKind::Exponential:
            if (psi.tau < 0) fail(ErrorCode::InvalidPsi, "exponential rate must be nonnegative");
            return;
        case PsiKind::PowerLaw:
            if (psi.alpha <= 0) fail(ErrorCode::InvalidPsi, "power-law exponent must be positive");
            return;
        case PsiKind::Geometric:
            if (psi.factor <= 0) fail(ErrorCode::InvalidPsi, "geometric factor must be positive");
            if (psi.ratio < 1) fail(ErrorCode::InvalidPsi, "psi must be nonincreasing");
            return;
        case PsiKind::Table: {
            if (psi.table.empty()) fail(ErrorCode::InvalidPsi, "table must be nonempty");
            for (std::size_t i = 0; i < psi.table.size(); ++i) {
                if (psi.table[i] <= 0) fail(ErrorCode::InvalidPsi, "psi values must be positive");
                if (i > 0 && psi.table[i] > psi.table[i - 1])
                    fail(ErrorCode::InvalidPsi, "psi must be nonincreasing");
            }
            return;
        }
    }
    fail(ErrorCode::InvalidPsi, "unknown psi kind");
}

namespace {

const Rat& table_at(const PsiSpec& psi, long n) {
    if (n < 1 || static_cast<std::size_t>(n) > psi.table.size())
        fail(ErrorCode::InvalidPsi, "psi table has no value at n=" + std::to_string(n));
    return psi.table[static_cast<std::size_t>(n - 1)];
}

}  // namespace

double psi_value(const PsiSpec& psi, long n) {
    if (n < 1) fail(ErrorCode::InvalidPsi, "psi is defined for n >= 1");
    switch (psi.kind) {
        case PsiKind::Exponential:
            return std::exp(-to_double(psi.tau) * static_cast<double>(n));
        case PsiKind::PowerLaw:
            return std::pow(static_cast<double>(n), -to_double(psi.alpha));
        case PsiKind::Geometric:
            return std::exp(log_psi(psi, n));
        case PsiKind::Table:
            return to_double(table_at(psi, n));
    }
    fail(ErrorCode::InvalidPsi, "unknown psi kind");
}

double log_psi(const PsiSpec& psi, long n) {
    if (n < 1) fail(ErrorCode::InvalidPsi, "psi is defined for n >= 1");
    switch (psi.kind) {
        case PsiKind::Exponential:
            return -to_double(psi.tau) * static_cast<double>(n);
        case PsiKind::PowerLaw:
            return -to_double(psi.alpha) * std::log(static_cast<double>(n));
        case PsiKind::Geometric:
            return log_rat(psi.factor) - static_cast<double>(n) * log_rat(psi.ratio);
        case PsiKind::Table:
            return log_rat(table_at(psi, n));
    }
    fail(ErrorCode::InvalidPsi, "unknown psi kind");
}

double tau_of_n(const PsiSpec& psi, long n) {
    return -log_psi(psi, n) / static_cast<double>(n);
}

std::optional<Rat> tau_of_n_exact(const PsiSpec& psi, long n) {
    if (n < 1) fail(ErrorCode::InvalidPsi, "psi is defined for n >= 1");
    if (psi.kind == PsiKind::Exponential) return psi.tau;
    if (psi.kind == PsiKind::Geometric && psi.factor == 1 && psi.ratio == 1) return Rat(0);
    return std::nullopt;
}

LowerOrder lower_order_at_infinity(const PsiSpec& psi, long horizon) {
    validate_psi(psi);
    switch (psi.kind) {
        case PsiKind::Exponential:
            return {to_double(psi.tau), true};
        case PsiKind::PowerLaw:
            return {0.0, true};
        case PsiKind::Geometric:
            return {log_rat(psi.ratio), true};
        case PsiKind::Table: {
            long hi = std::min<long>(horizon, static_cast<long>(psi.table.size()));
            if (hi < 1) fail(ErrorCode::InvalidPsi, "horizon precedes table start");
            long lo = std::max<long>(1, hi / 2);
            LowerOrder out{tau_of_n(psi, lo), true};
            bool up = true, down = true;
            double prev = out.value;
            for (long n = lo + 1; n <= hi; ++n) {
                double t = tau_of_n(psi, n);
                out.value = std::min(out.value, t);
                if (t < prev - 1e-15) up = false;
                if (t > prev + 1e-15) down = false;
                prev = t;
            }
            out.tail_monotone = up || down;
            return out;
        }
    }
    fail(ErrorCode::InvalidPsi, "unknown psi kind");
}

}  // namespace hdim
