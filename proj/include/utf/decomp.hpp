#pragma once

#include "utf/flags.hpp"
#include "utf/linalg.hpp"
#include "utf/matrix.hpp"

namespace utf {

// Additive splitting T = N + Q along an ordered-Schur flag: N is normal and
// carries the full spectral distribution of T, Q is nilpotent (strictly upper
// triangular in the flag basis).
struct Decomposition {
    Matrix n_part;  // normal, same eigenvalue multiset as T
    Matrix q_part;  // T - N exactly; strictly upper in the flag basis
    Flag flag;      // maximal flag of invariant subspaces, cuts 0..n
    OrderingTag order;
};

// Maximal flag (cuts at every index) whose basis is the ordered Schur basis
// of t.  Every projection is t-invariant, and the corner on the first k
// columns carries the first k eigenvalues in the chosen order.
Flag hs_flag(const Matrix& t, const OrderingTag& order);

// N = the diagonal part of t in the ordered Schur basis (conjugated back),
// Q = t - N.  The eigenvalue multisets of N and t coincide.
Decomposition decompose(const Matrix& t, const OrderingTag& order);

// X = N^{-1} Q, exactly strictly upper triangular in the flag basis, so that
// t = N (I + X).  Throws ZeroInSupport when some eigenvalue of N is smaller
// than 1e-8 * ||t||_F in magnitude (N too close to singular).
Matrix multiplicative_form(const Decomposition& d);

}  // namespace utf
