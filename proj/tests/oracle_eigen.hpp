/**
 * oracle_eigen.hpp
 *
 * Independent singular-value oracle for the spectra tests, backed by Eigen's
 * Jacobi SVD in plain double precision.  Only suitable for matrices whose
 * entries and condition numbers fit comfortably in doubles.
 */
#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "hdim/matrix.hpp"
#include "hdim/numeric.hpp"

inline std::vector<double> oracle_singular_values(const hdim::Mat<hdim::Rat>& m) {
    Eigen::MatrixXd a(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a(i, j) = hdim::to_double(m(i, j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end());
    return out;
}
