#include "hdim/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "hdim/eigen_sym.hpp"

namespace hdim {

namespace {

Vec<double> diagonal_log_profile(const MatrixFamily& fam, long n) {
    const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
    Vec<double> l(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (fam.diag_log_scale)
            l[i] = to_double(row[i]) / static_cast<double>(n);
        else
            l[i] = log_rat(abs(row[i])) / static_cast<double>(n);
    }
    std::sort(l.begin(), l.end());
    return l;
}

}  // namespace

SpectralProfile<double> spectral_profile(const MatrixFamily& fam, const PsiSpec& psi, long n) {
    validate_family(fam);
    validate_psi(psi);
    SpectralProfile<double> out;
    out.n = n;
    out.tau = tau_of_n(psi, n);
    if (fam.kind == FamilyKind::Diagonal) {
        if (n < 1 || n > family_horizon(fam))
            fail(ErrorCode::InvalidConfig, "family has no matrix at n=" + std::to_string(n));
        out.l = diagonal_log_profile(fam, n);
        return out;
    }
    Mat<Rat> a = generate_matrix_exact(fam, n);
    SingularValues<BigFloat> sv = singular_values(mat_cast<BigFloat>(a));
    out.l.resize(sv.sigma.size());
    for (std::size_t i = 0; i < sv.sigma.size(); ++i) {
        if (sv.sigma[i] <= 0)
            fail(ErrorCode::SingularMatrix, "zero singular value at n=" + std::to_string(n));
        out.l[i] = to_double(log(sv.sigma[i])) / static_cast<double>(n);
    }
    std::sort(out.l.begin(), out.l.end());
    return out;
}

std::optional<SpectralProfile<Rat>> spectral_profile_exact(const MatrixFamily& fam,
                                                           const PsiSpec& psi, long n) {
    validate_family(fam);
    validate_psi(psi);
    if (!(fam.kind == FamilyKind::Diagonal && fam.diag_log_scale)) return std::nullopt;
    std::optional<Rat> tau = tau_of_n_exact(psi, n);
    if (!tau) return std::nullopt;
    if (n < 1 || n > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "family has no matrix at n=" + std::to_string(n));
    SpectralProfile<Rat> out;
    out.n = n;
    out.tau = *tau;
    const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
    out.l.resize(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) out.l[i] = row[i] / n;
    std::sort(out.l.begin(), out.l.end());
    // Diagonal lattice: minima are the sorted inverse moduli, so h is l reversed.
    Vec<Rat> h(out.l.rbegin(), out.l.rend());
    out.h = std::move(h);
    return out;
}

namespace {

double sup_dist(const Vec<double>& a, const Vec<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Vec<double> analytic_limit(const MatrixFamily& fam) {
    std::vector<double> moduli = generator_moduli(fam);
    if (moduli.front() <= 1.0 + 1e-9)
        fail(ErrorCode::UnsupportedAnalytic,
             "analytic accumulation set needs every generator modulus > 1");
    Vec<double> pt(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) pt[i] = std::log(moduli[i]);
    return pt;
}

}  // namespace

AccumulationSet accumulation_set(const MatrixFamily& fam, const PsiSpec& psi,
                                 AccumulationMode mode, long n_lo, long n_hi,
                                 double merge_radius, long burn_in) {
    validate_family(fam);
    AccumulationSet out;
    if (mode == AccumulationMode::Analytic) {
        out.analytic = true;
        out.points.push_back(analytic_limit(fam));
        out.cluster_sizes.push_back(1);
        return out;
    }
    if (n_lo < 1 || n_hi < n_lo) fail(ErrorCode::InvalidConfig, "bad accumulation range");
    std::vector<Vec<double>> profiles;
    for (long n = std::max(n_lo, burn_in); n <= std::min(n_hi, family_horizon(fam)); ++n)
        profiles.push_back(spectral_profile(fam, psi, n).l);
    if (profiles.empty())
        fail(ErrorCode::InvalidConfig, "accumulation range is empty after burn-in");

    // Single-linkage merge: union any two profiles within the radius.
    std::vector<std::size_t> parent(profiles.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = i + 1; j < profiles.size(); ++j)
            if (sup_dist(profiles[i], profiles[j]) <= merge_radius) parent[find(i)] = find(j);

    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (find(i) == i) roots.push_back(i);
    for (std::size_t r : roots) {
        Vec<double> centroid(profiles.front().size(), 0.0);
        int count = 0;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            if (find(i) == r) {
                for (std::size_t k = 0; k < centroid.size(); ++k) centroid[k] += profiles[i][k];
                ++count;
            }
        for (double& c : centroid) c /= count;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            if (find(i) == r)
                out.max_residual = std::max(out.max_residual, sup_dist(profiles[i], centroid));
        out.points.push_back(std::move(centroid));
        out.cluster_sizes.push_back(count);
    }

    // Canonical order: lexicographic on coordinates.
    std::vector<std::size_t> order(out.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.points[a] < out.points[b];
    });
    AccumulationSet sorted;
    sorted.analytic = false;
    sorted.max_residual = out.max_residual;
    for (std::size_t i : order) {
        sorted.points.push_back(std::move(out.points[i]));
        sorted.cluster_sizes.push_back(out.cluster_sizes[i]);
    }
    return sorted;
}

std::optional<long> stabilization_index(const MatrixFamily& fam, const PsiSpec& psi,
                                        double eps, long n_lo, long n_hi) {
    Vec<double> limit = analytic_limit(fam);
    if (n_lo < 1 || n_hi < n_lo) fail(ErrorCode::InvalidConfig, "bad stabilization range");
    std::optional<long> first;
    for (long n = n_lo; n <= n_hi; ++n) {
        double dist = sup_dist(spectral_profile(fam, psi, n).l, limit);
        if (dist <= eps) {
            if (!first) first = n;
        } else {
            first.reset();
        }
    }
    return first;
}

}  // namespace hdim
