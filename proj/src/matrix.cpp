#include "utf/matrix.hpp"

#include <cmath>
#include <string>

#include "utf/errors.hpp"

namespace utf {

Matrix::Matrix(int n) : n_(n) {
    if (n <= 0) throw InvalidInput("matrix dimension must be positive");
    e_.assign(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
}

Matrix::Matrix(int n, std::vector<Complex> entries) : n_(n), e_(std::move(entries)) {
    if (n <= 0) throw InvalidInput("matrix dimension must be positive");
    if (e_.size() != static_cast<std::size_t>(n) * n)
        throw DimensionMismatch("entry count " + std::to_string(e_.size()) +
                                " does not match dimension " + std::to_string(n));
    check_finite();
}

void Matrix::check_finite() const {
    for (const Complex& z : e_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidInput("matrix entries must be finite");
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<Complex>& d) {
    Matrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<Complex> e;
    e.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw DimensionMismatch("row length does not match row count");
        e.insert(e.end(), row.begin(), row.end());
    }
    return Matrix(n, std::move(e));
}

Matrix Matrix::adjoint() const {
    Matrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex Matrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

Complex Matrix::normalized_trace() const { return trace() / static_cast<double>(n_); }

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : e_) s += std::norm(z);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : e_) m = std::max(m, std::abs(z));
    return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (!equal_dims(*this, rhs)) throw DimensionMismatch("matrix addition needs equal dimensions");
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += rhs.e_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (!equal_dims(*this, rhs))
        throw DimensionMismatch("matrix subtraction needs equal dimensions");
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= rhs.e_[k];
    return *this;
}

Matrix& Matrix::operator*=(Complex s) {
    for (Complex& z : e_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (!equal_dims(lhs, rhs))
        throw DimensionMismatch("matrix product needs equal dimensions");
    const int n = lhs.dim();
    Matrix out(n);
    // i-k-j order keeps both operands streaming row-major.
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex(0.0, 0.0)) continue;  // exact zeros stay exact in products
            for (int j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

Matrix shift(const Matrix& a, Complex z) {
    Matrix m = a;
    for (int i = 0; i < a.dim(); ++i) m(i, i) -= z;
    return m;
}

bool equal_dims(const Matrix& a, const Matrix& b) { return a.dim() == b.dim(); }

}  // namespace utf
