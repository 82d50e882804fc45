#include "hdim/family.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace hdim {

MatrixFamily MatrixFamily::explicit_list(std::vector<Mat<Rat>> ms) {
    MatrixFamily f;
    f.kind = FamilyKind::ExplicitList;
    f.matrices = std::move(ms);
    f.d = f.matrices.empty() ? 0 : f.matrices.front().rows();
    return f;
}

MatrixFamily MatrixFamily::power(Mat<Rat> a) {
    MatrixFamily f;
    f.kind = FamilyKind::Power;
    f.d = a.rows();
    f.base = std::move(a);
    return f;
}

MatrixFamily MatrixFamily::power_minus_identity(Mat<Rat> a) {
    MatrixFamily f;
    f.kind = FamilyKind::PowerMinusIdentity;
    f.d = a.rows();
    f.base = std::move(a);
    return f;
}

MatrixFamily MatrixFamily::scaled_power(BigInt lambda, Mat<Rat> a) {
    MatrixFamily f;
    f.kind = FamilyKind::ScaledPower;
    f.d = a.rows();
    f.base = std::move(a);
    f.scale = std::move(lambda);
    return f;
}

MatrixFamily MatrixFamily::diagonal(std::vector<Vec<Rat>> entries, bool log_scale) {
    MatrixFamily f;
    f.kind = FamilyKind::Diagonal;
    f.diag_entries = std::move(entries);
    f.diag_log_scale = log_scale;
    f.d = f.diag_entries.empty() ? 0 : static_cast<int>(f.diag_entries.front().size());
    return f;
}

MatrixFamily MatrixFamily::jordan(std::vector<JordanBlockSpec> bs) {
    MatrixFamily f;
    f.kind = FamilyKind::Jordan;
    f.blocks = std::move(bs);
    f.d = 0;
    for (const auto& b : f.blocks) f.d += b.size;
    return f;
}

void validate_family(const MatrixFamily& fam) {
    if (fam.d <= 0) fail(ErrorCode::InvalidConfig, "family dimension must be positive");
    switch (fam.kind) {
        case FamilyKind::ExplicitList:
            if (fam.matrices.empty())
                fail(ErrorCode::InvalidConfig, "explicit family needs at least one matrix");
            for (const auto& m : fam.matrices)
                if (m.rows() != fam.d || m.cols() != fam.d)
                    fail(ErrorCode::InvalidConfig, "explicit family matrices must be d x d");
            return;
        case FamilyKind::Power:
        case FamilyKind::PowerMinusIdentity:
            if (fam.base.rows() != fam.d || fam.base.cols() != fam.d)
                fail(ErrorCode::InvalidConfig, "base matrix must be d x d");
            return;
        case FamilyKind::ScaledPower: {
            if (fam.base.rows() != fam.d || fam.base.cols() != fam.d)
                fail(ErrorCode::InvalidConfig, "base matrix must be d x d");
            if (fam.scale < 2)
                fail(ErrorCode::InvalidConfig, "scaled power factor must be an integer >= 2");
            Rat dt = det(fam.base);
            if (dt != 1 && dt != -1)
                fail(ErrorCode::InvalidConfig, "scaled power base must have |det| = 1");
            return;
        }
        case FamilyKind::Diagonal:
            if (fam.diag_entries.empty())
                fail(ErrorCode::InvalidConfig, "diagonal family needs at least one row");
            for (const auto& row : fam.diag_entries) {
                if (static_cast<int>(row.size()) != fam.d)
                    fail(ErrorCode::InvalidConfig, "diagonal rows must have d entries");
                if (!fam.diag_log_scale)
                    for (const auto& e : row)
                        if (e == 0) fail(ErrorCode::InvalidConfig, "diagonal entries must be nonzero");
            }
            return;
        case FamilyKind::Jordan: {
            if (fam.blocks.empty()) fail(ErrorCode::InvalidConfig, "jordan family needs blocks");
            int total = 0;
            for (const auto& b : fam.blocks) {
                if (b.size < 1) fail(ErrorCode::InvalidConfig, "jordan block size must be >= 1");
                if (b.lambda == 0) fail(ErrorCode::InvalidConfig, "jordan eigenvalue must be nonzero");
                total += b.size;
            }
            if (total != fam.d)
                fail(ErrorCode::InvalidConfig, "jordan block sizes must sum to the dimension");
            return;
        }
    }
    fail(ErrorCode::InvalidConfig, "unknown family kind");
}

long family_horizon(const MatrixFamily& fam) {
    switch (fam.kind) {
        case FamilyKind::ExplicitList:
            return static_cast<long>(fam.matrices.size());
        case FamilyKind::Diagonal:
            return static_cast<long>(fam.diag_entries.size());
        default:
            return LONG_MAX;
    }
}

bool has_exact_matrix(const MatrixFamily& fam) {
    return !(fam.kind == FamilyKind::Diagonal && fam.diag_log_scale);
}

Mat<Rat> jordan_base(const std::vector<JordanBlockSpec>& blocks) {
    int d = 0;
    for (const auto& b : blocks) d += b.size;
    Mat<Rat> j(d, d);
    int at = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.size; ++i) {
            j(at + i, at + i) = b.lambda;
            if (i + 1 < b.size) j(at + i, at + i + 1) = Rat(1);
        }
        at += b.size;
    }
    return j;
}

namespace {

void require_index(const MatrixFamily& fam, long n) {
    if (n < 1) fail(ErrorCode::InvalidConfig, "matrix index must be >= 1");
    if (n > family_horizon(fam))
        fail(ErrorCode::InvalidConfig, "family has no matrix at n=" + std::to_string(n));
}

Mat<Rat> check_invertible(Mat<Rat> m, long n) {
    if (det(m) == 0)
        fail(ErrorCode::SingularMatrix, "A_n is singular at n=" + std::to_string(n));
    return m;
}

}  // namespace

Mat<Rat> generate_matrix_exact(const MatrixFamily& fam, long n) {
    require_index(fam, n);
    switch (fam.kind) {
        case FamilyKind::ExplicitList:
            return check_invertible(fam.matrices[static_cast<std::size_t>(n - 1)], n);
        case FamilyKind::Power:
            return check_invertible(mat_pow(fam.base, n), n);
        case FamilyKind::PowerMinusIdentity: {
            Mat<Rat> m = mat_pow(fam.base, n) - Mat<Rat>::identity(fam.d);
            return check_invertible(std::move(m), n);
        }
        case FamilyKind::ScaledPower: {
            Mat<Rat> scaled = fam.base * Rat(fam.scale);
            return check_invertible(mat_pow(scaled, n), n);
        }
        case FamilyKind::Diagonal: {
            if (fam.diag_log_scale)
                fail(ErrorCode::NumericalFailure,
                     "log-scale diagonal families have no exact matrix entries");
            Mat<Rat> m(fam.d, fam.d);
            const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
            for (int i = 0; i < fam.d; ++i) m(i, i) = row[static_cast<std::size_t>(i)];
            return m;
        }
        case FamilyKind::Jordan:
            return check_invertible(mat_pow(jordan_base(fam.blocks), n), n);
    }
    fail(ErrorCode::InvalidConfig, "unknown family kind");
}

Mat<double> generate_matrix(const MatrixFamily& fam, long n) {
    if (fam.kind == FamilyKind::Diagonal && fam.diag_log_scale) {
        require_index(fam, n);
        Mat<double> m(fam.d, fam.d);
        const auto& row = fam.diag_entries[static_cast<std::size_t>(n - 1)];
        for (int i = 0; i < fam.d; ++i)
            m(i, i) = std::exp(to_double(row[static_cast<std::size_t>(i)]));
        return m;
    }
    return mat_cast<double>(generate_matrix_exact(fam, n));
}

std::vector<double> generator_moduli(const MatrixFamily& fam) {
    switch (fam.kind) {
        case FamilyKind::Power:
        case FamilyKind::PowerMinusIdentity:
            return eigenvalue_moduli(fam.base);
        case FamilyKind::ScaledPower: {
            std::vector<double> m = eigenvalue_moduli(fam.base);
            double s = to_double(fam.scale);
            for (double& x : m) x *= s;
            return m;
        }
        case FamilyKind::Jordan: {
            std::vector<double> m;
            for (const auto& b : fam.blocks)
                m.insert(m.end(), static_cast<std::size_t>(b.size),
                         std::abs(to_double(b.lambda)));
            std::sort(m.begin(), m.end());
            return m;
        }
        default:
            fail(ErrorCode::UnsupportedAnalytic,
                 "generator moduli need a power-like family");
    }
}

bool generator_expanding(const MatrixFamily& fam) {
    std::vector<double> m = generator_moduli(fam);
    return !m.empty() && m.front() > 1.0 + 1e-9;
}

}  // namespace hdim
