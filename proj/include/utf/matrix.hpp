#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace utf {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.  All operators in this project act
// on square matrices of one fixed dimension, so rectangular storage is not
// modelled; block operations slice index ranges instead.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int n);  // zero matrix
    Matrix(int n, std::vector<Complex> entries);

    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<Complex>& d);
    // Row-by-row literal, for tests and small examples.
    static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    int dim() const { return n_; }

    Complex& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const {
        return e_[static_cast<std::size_t>(i) * n_ + j];
    }

    const std::vector<Complex>& entries() const { return e_; }

    Matrix adjoint() const;
    Complex trace() const;
    // Normalized trace tau = tr/n, the tracial state at matrix scale.
    Complex normalized_trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(Complex s);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Complex s, Matrix m) { return m *= s; }
    friend Matrix operator*(Matrix m, Complex s) { return m *= s; }
    friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

  private:
    int n_ = 0;
    std::vector<Complex> e_;

    void check_finite() const;
};

// a - z*I, the pencil used by resolvents and determinant sweeps.
Matrix shift(const Matrix& a, Complex z);

bool equal_dims(const Matrix& a, const Matrix& b);

}  // namespace utf
