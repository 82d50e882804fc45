#include "hdim/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdim/eigen_sym.hpp"
#include "hdim/errors.hpp"

namespace hdim {

namespace {

constexpr double kTieTol = 1e-12;

std::vector<double> expanding_logs(std::vector<double>& moduli, double tau) {
    if (moduli.empty()) fail(ErrorCode::InvalidConfig, "no eigenvalue moduli given");
    if (tau < 0.0) fail(ErrorCode::InvalidConfig, "tau must be nonnegative");
    std::sort(moduli.begin(), moduli.end());
    if (moduli.front() <= 1.0 + 1e-9)
        fail(ErrorCode::NotExpanding, "every eigenvalue modulus must exceed 1");
    std::vector<double> l(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) l[i] = std::log(moduli[i]);
    return l;
}

}  // namespace

double formula_diagonalizable(std::vector<double> eigen_moduli, double tau) {
    std::vector<double> l = expanding_logs(eigen_moduli, tau);
    const int d = static_cast<int>(l.size());
    double best = 0.0;
    for (int i = 0; i < d; ++i) {
        double num = (i + 1) * l[i];
        for (int j = 0; j < d; ++j) {
            if (l[j] > tau + l[i] + kTieTol) num -= l[j] - l[i] - tau;
            if (j > i) num += l[j];
        }
        double value = num / (tau + l[i]);
        if (i == 0 || value < best) best = value;
    }
    return best;
}

double formula_hat(std::vector<double> eigen_moduli, double tau) {
    std::vector<double> l = expanding_logs(eigen_moduli, tau);
    const int d = static_cast<int>(l.size());
    double best = 0.0;
    for (int i = 0; i < d; ++i) {
        double num = 0.0;
        for (int j = 0; j < d; ++j) {
            num += l[j];
            if (l[j] < l[i] - kTieTol) num -= l[j] - l[i];
        }
        double value = num / (tau + l[i]);
        if (i == 0 || value < best) best = value;
    }
    return best;
}

double formula_jordan(const std::vector<JordanBlockSpec>& blocks, double tau) {
    if (blocks.empty()) fail(ErrorCode::InvalidConfig, "no Jordan blocks given");
    if (tau < 0.0) fail(ErrorCode::InvalidConfig, "tau must be nonnegative");
    const int m = static_cast<int>(blocks.size());
    std::vector<double> l(blocks.size());
    for (int j = 0; j < m; ++j) {
        if (blocks[static_cast<std::size_t>(j)].size < 1)
            fail(ErrorCode::InvalidConfig, "block sizes must be positive");
        double mod = std::abs(to_double(blocks[static_cast<std::size_t>(j)].lambda));
        if (mod <= 1.0 + 1e-9)
            fail(ErrorCode::NotExpanding, "every block eigenvalue modulus must exceed 1");
        l[static_cast<std::size_t>(j)] = std::log(mod);
    }
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
            double nj = blocks[static_cast<std::size_t>(j)].size;
            if (l[j] > l[i] + tau + kTieTol) {
                s += nj;
            } else if (l[j] < l[i] - kTieTol) {
                s += nj * l[i] / (l[i] + tau);
            } else {
                s += nj * l[j] / (l[i] + tau);
            }
        }
        if (i == 0 || s < best) best = s;
    }
    return best;
}

double formula_counterexample(const BigInt& lambda, const Mat<Rat>& a, double tau) {
    if (a.rows() != 2 || a.cols() != 2)
        fail(ErrorCode::InvalidCounterexampleFamily, "generator must be 2x2");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (denom(a(i, j)) != 1)
                fail(ErrorCode::InvalidCounterexampleFamily, "generator must be integer");
    if (a(0, 1) != a(1, 0))
        fail(ErrorCode::InvalidCounterexampleFamily, "generator must be symmetric");
    Rat dt = det(a);
    if (dt != 1 && dt != -1)
        fail(ErrorCode::InvalidCounterexampleFamily, "generator must be unimodular");
    if (lambda < 1)
        fail(ErrorCode::InvalidCounterexampleFamily, "scale must be a positive integer");
    std::vector<double> moduli = eigenvalue_moduli(a);
    for (double m : moduli)
        if (std::abs(m - 1.0) <= 1e-9)
            fail(ErrorCode::InvalidCounterexampleFamily,
                 "generator has a unit eigenvalue modulus");
    const double scale = to_double(lambda);
    for (double& m : moduli) m *= scale;
    if (moduli.front() <= 1.0 + 1e-9)
        fail(ErrorCode::InvalidCounterexampleFamily, "scaled generator must be expanding");
    return formula_hat(moduli, tau);
}

double formula_example1(long k, double tau) {
    if (tau < 0.0) fail(ErrorCode::InvalidConfig, "tau must be nonnegative");
    const double s5 = std::sqrt(5.0);
    const double lam2 = (15.0 + 5.0 * s5) / 2.0;
    if (static_cast<double>(k) <= std::pow(lam2, 1.5))
        fail(ErrorCode::HypothesisViolated, "k must exceed the 3/2 power of the top modulus");
    const double l1 = std::log((15.0 - 5.0 * s5) / 2.0);
    const double l2 = std::log(lam2);
    const double l3 = std::log(static_cast<double>(k));

    const double low = (tau + 2.0 * l1 + l2) / (tau + l1);
    const double low_sat = (l1 + l2 + l3) / (tau + l1);
    const double mid = (tau + 3.0 * l2) / (tau + l2);
    const double mid_sat = (2.0 * l2 + l3) / (tau + l2);
    const double top = 3.0 * l3 / (tau + l3);

    if (tau <= (l2 - l1) / 2.0) return std::min(mid, top);
    if (tau <= l3 - l2) return std::min({low, mid, top});
    if (tau <= l3 - l1) return std::min({low, mid_sat, top});
    return std::min({low_sat, mid_sat, top});
}

SeqSpec SeqSpec::geometric(Rat coeff, Rat base) {
    SeqSpec s;
    s.kind = SeqKind::Geometric;
    s.coeff = std::move(coeff);
    s.base = std::move(base);
    return s;
}

SeqSpec SeqSpec::polynomial(Rat coeff, int degree) {
    SeqSpec s;
    s.kind = SeqKind::Polynomial;
    s.coeff = std::move(coeff);
    s.degree = degree;
    return s;
}

namespace {

void validate_seq(const SeqSpec& seq) {
    if (seq.coeff <= 0) fail(ErrorCode::InvalidConfig, "sequence coefficient must be positive");
    switch (seq.kind) {
        case SeqKind::Geometric:
            if (seq.base <= 1) fail(ErrorCode::InvalidConfig, "geometric base must exceed 1");
            if (seq.coeff * seq.base < 1)
                fail(ErrorCode::InvalidConfig, "sequence values must be at least 1");
            return;
        case SeqKind::Polynomial:
            if (seq.degree < 1) fail(ErrorCode::InvalidConfig, "degree must be at least 1");
            if (seq.coeff < 1)
                fail(ErrorCode::InvalidConfig, "sequence values must be at least 1");
            return;
    }
    fail(ErrorCode::InvalidConfig, "unknown sequence kind");
}

long clamp_horizon(const PsiSpec& psi, long horizon) {
    if (psi.kind == PsiKind::Table)
        return std::min<long>(horizon, static_cast<long>(psi.table.size()));
    return horizon;
}

}  // namespace

double log_seq(const SeqSpec& seq, long n) {
    if (n < 1) fail(ErrorCode::InvalidConfig, "sequences are defined for n >= 1");
    switch (seq.kind) {
        case SeqKind::Geometric:
            return log_rat(seq.coeff) + static_cast<double>(n) * log_rat(seq.base);
        case SeqKind::Polynomial:
            return log_rat(seq.coeff) +
                   seq.degree * std::log(static_cast<double>(n));
    }
    fail(ErrorCode::InvalidConfig, "unknown sequence kind");
}

double seq_value(const SeqSpec& seq, long n) { return std::exp(log_seq(seq, n)); }

Formula1D formula_1d(const SeqSpec& seq, const PsiSpec& psi, long horizon) {
    validate_seq(seq);
    validate_psi(psi);
    Formula1D out;
    if (seq.kind == SeqKind::Geometric) {
        const double l = log_rat(seq.base);
        if (psi.kind == PsiKind::Exponential) {
            out.value = std::min(1.0, l / (l + to_double(psi.tau)));
            out.exact = true;
            return out;
        }
        if (psi.kind == PsiKind::Geometric) {
            out.value = std::min(1.0, l / (l + log_rat(psi.ratio)));
            out.exact = true;
            return out;
        }
    } else {
        out.lower_bound_only = true;
    }
    const long hi = clamp_horizon(psi, horizon);
    if (hi < 10) fail(ErrorCode::InvalidConfig, "horizon must be at least 10");
    double best = 0.0;
    for (long n = tail_window_start(1, hi); n <= hi; ++n) {
        const double la = log_seq(seq, n);
        const double gap = la - log_psi(psi, n);
        const double ratio = gap <= 1e-12 ? 1.0 : la / gap;
        best = std::max(best, ratio);
    }
    out.value = std::min(1.0, best);
    return out;
}

namespace {

// Sign of the fitted growth slope of ln(a_n (psi(n)/a_n)^s) over the tail
// window: +1 diverging, -1 converging, 0 too flat to call.
int classify_series(const SeqSpec& seq, const PsiSpec& psi, long hi, double s) {
    std::vector<double> xs, ys;
    for (long n = tail_window_start(1, hi); n <= hi; ++n) {
        const double la = log_seq(seq, n);
        xs.push_back(static_cast<double>(n));
        ys.push_back(la + s * (log_psi(psi, n) - la));
    }
    const double slope = fit_line(xs, ys).slope;
    if (slope > 1e-6) return 1;
    if (slope < -1e-6) return -1;
    return 0;
}

}  // namespace

CriticalCheck critical_exponent_check(const SeqSpec& seq, const PsiSpec& psi, long horizon) {
    validate_seq(seq);
    validate_psi(psi);
    if (seq.kind == SeqKind::Polynomial)
        fail(ErrorCode::Inconclusive,
             "sequence growth rate is zero; the series test cannot separate");
    const long hi = clamp_horizon(psi, horizon);
    if (hi < 10) fail(ErrorCode::InvalidConfig, "horizon must be at least 10");

    CriticalCheck out;
    out.formula = formula_1d(seq, psi, horizon).value;
    double lo = 0.0, up = 1.5;
    if (classify_series(seq, psi, hi, lo) != 1)
        fail(ErrorCode::Inconclusive, "series does not diverge at s=0");
    if (classify_series(seq, psi, hi, up) != -1)
        fail(ErrorCode::Inconclusive, "series does not converge at s=1.5");
    bool settled = false;
    while (up - lo > 1e-4) {
        const double mid = 0.5 * (lo + up);
        const int c = classify_series(seq, psi, hi, mid);
        if (c == 0) {
            // Flat slope: mid sits inside the threshold's resolution band, so
            // it is the best available estimate of the critical exponent.
            out.critical = mid;
            settled = true;
            break;
        }
        (c > 0 ? lo : up) = mid;
    }
    if (!settled) out.critical = 0.5 * (lo + up);
    out.agree = std::abs(out.critical - out.formula) <= 0.02;
    return out;
}

}  // namespace hdim
