#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "utf/matrix.hpp"

namespace testutil {

inline double diff_norm(const utf::Matrix& a, const utf::Matrix& b) {
    return (a - b).frobenius_norm();
}

inline double rel_diff(const utf::Matrix& a, const utf::Matrix& b) {
    return diff_norm(a, b) / std::max(1.0, a.frobenius_norm());
}

// Frobenius mass of the on-or-below-diagonal part of U* q U: zero exactly
// when q is strictly upper triangular in the given unitary basis.
inline double lower_mass_in_basis(const utf::Matrix& q, const utf::Matrix& basis) {
    const utf::Matrix c = basis.adjoint() * q * basis;
    double s = 0.0;
    for (int i = 0; i < c.dim(); ++i)
        for (int j = 0; j <= i; ++j) s += std::norm(c(i, j));
    return std::sqrt(s);
}

// Largest diagonal modulus of U* q U: the spectral-radius witness for a
// matrix triangularized by the given basis.
inline double diag_radius_in_basis(const utf::Matrix& q, const utf::Matrix& basis) {
    const utf::Matrix c = basis.adjoint() * q * basis;
    double r = 0.0;
    for (int i = 0; i < c.dim(); ++i) r = std::max(r, std::abs(c(i, i)));
    return r;
}

inline double unitary_defect(const utf::Matrix& u) {
    return diff_norm(u.adjoint() * u, utf::Matrix::identity(u.dim()));
}

inline double min_pair_gap(const std::vector<utf::Complex>& v) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) g = std::min(g, std::abs(v[i] - v[j]));
    return g;
}

}  // namespace testutil
