#pragma once

#include <string>
#include <utility>

#include "utf/matrix.hpp"
#include "utf/rng.hpp"

namespace utf {

// Haar-distributed unitary: complex Gaussian matrix orthonormalized by
// modified Gram-Schmidt with positive diagonal normalization.
Matrix haar_unitary(int n, Rng& rng);

// Upper triangular: diagonal of well-separated moduli in [0.25, 1.5] with
// random phases (shuffled so the diagonal is not pre-ordered), strictly upper
// Gaussian entries of scale 0.5/sqrt(n).
Matrix gen_triangular(int n, Rng& rng);

// gen_triangular conjugated by a Haar unitary: generic dense matrix with a
// planted, well-separated spectrum.
Matrix gen_spectral(int n, Rng& rng);

// (N, Q) with N normal, Q nilpotent, NQ = QN: block diagonal over blocks of
// size 1 or 2, each block of N a scalar, each 2-block of Q strictly upper,
// the whole pair conjugated by one Haar unitary.  Block scalars have
// well-separated moduli in [0.3, 1.2].
std::pair<Matrix, Matrix> gen_commuting_pair(int n, Rng& rng);

// Planted spectrum with one eigenvalue pair at distance 10^U(-4,-2) (all
// other pairs at least 0.04 apart), so the minimal eigenvalue gap lands in
// [1e-4, 1e-2]; conjugated by a Haar unitary.  Stresses eigenvalue
// reordering.
Matrix gen_near_defective(int n, Rng& rng);

// Dispatch by kind name: "triangular", "spectral", "near-defective".
// ("commuting-pair" produces two matrices; call gen_commuting_pair directly.)
Matrix generate(const std::string& kind, int n, Rng& rng);

}  // namespace utf
