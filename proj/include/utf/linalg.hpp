#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "utf/matrix.hpp"

namespace utf {

// Total order on eigenvalues used by ordered Schur forms and the
// decomposition.  The two named orders serialize as "modulus" and "real";
// a custom comparator is accepted programmatically but not serializable.
class OrderingTag {
  public:
    using Less = std::function<bool(Complex, Complex)>;

    static OrderingTag modulus_then_argument();
    static OrderingTag real_then_imag();
    static OrderingTag custom(std::string name, Less less);

    const std::string& name() const { return name_; }
    bool less(Complex a, Complex b) const { return less_(a, b); }

  private:
    OrderingTag(std::string name, Less less) : name_(std::move(name)), less_(std::move(less)) {}
    std::string name_;
    Less less_;
};

struct SchurForm {
    Matrix u;  // unitary
    Matrix r;  // upper triangular, exact zeros below the diagonal
    std::string order;

    std::vector<Complex> diagonal() const;
};

// Unitary triangularization by Householder reduction to Hessenberg form and
// implicit single-shift QR with deflation, then eigenvalue reordering by
// unitary swaps of adjacent diagonal entries.  Throws NonConvergence after
// max_sweeps QR steps (default 30n).  Diagonal values within
// 1e-9 * ||t||_F of each other are treated as tied and keep their relative
// order from the unordered form, so noise never reorders equal eigenvalues.
SchurForm schur(const Matrix& t, const OrderingTag& order, int max_sweeps = 0);

// Reorder an existing Schur form so that position i holds the diagonal entry
// originally at target[i].  Used by the cluster-grouping functional calculus.
void schur_reorder(SchurForm& form, const std::vector<int>& target);

std::vector<Complex> eigenvalues(const Matrix& t);

// Descending, clamped at zero; square roots of the Hermitian eigenvalues of
// t* t.
std::vector<double> singular_values(const Matrix& t);

double operator_norm(const Matrix& t);   // largest singular value
double spectral_radius(const Matrix& t);

// Eigendecomposition of a Hermitian matrix (input is symmetrized first).
// Returns unitary V and ascending real eigenvalues with t ~ V diag V*.
std::pair<Matrix, std::vector<double>> hermitian_eigen(const Matrix& t);

// Hermitian PSD power: eigenvalues clamped at zero, raised to p, reassembled.
Matrix psd_power(const Matrix& t, double p);

// Solve a x = b by Gaussian elimination with partial pivoting.  Throws
// SingularMatrix when a is singular to working precision.
Matrix solve(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

Complex determinant(const Matrix& a);  // via the same pivoted elimination

// 1 + kappa_F estimate for tolerance scaling, capped at 1e6.
double cond_factor(const Matrix& a);

// Greedy nearest-neighbour matching distance between two eigenvalue
// multisets (max over matched pairs).  Not a metric for adversarial
// clusterings, but stable and cheap at this scale.  Infinity if sizes differ.
double match_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace utf
