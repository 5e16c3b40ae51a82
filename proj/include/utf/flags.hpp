#pragma once

#include <utility>
#include <vector>

#include "utf/matrix.hpp"

namespace utf {

// An orthogonal projection P = P* = P^2 with a fixed unitary frame whose
// first rank() columns span range(P).  The frame makes corner compressions
// deterministic: the same projection value always yields byte-identical
// corners.
class Projection {
  public:
    // Validates P = P* (1e-12), P^2 = P (1e-10), trace within 1e-8 of an
    // integer; derives the frame from a Hermitian eigendecomposition.
    explicit Projection(const Matrix& p);

    // Projection onto the span of the first k columns of a unitary basis;
    // the basis itself becomes the frame, so corners of flag projections are
    // literal sub-blocks of the flag-coordinate matrix.
    static Projection onto_first_columns(const Matrix& basis, int k);

    const Matrix& matrix() const { return p_; }
    int rank() const { return rank_; }
    int dim() const { return p_.dim(); }
    const Matrix& frame() const { return frame_; }

    Projection complement() const;  // I - P, frame columns rotated accordingly

  private:
    Projection() = default;
    Matrix p_;
    Matrix frame_;
    int rank_ = 0;
};

// Increasing chain of nested subspaces: cuts 0 = c_0 < c_1 < ... < c_m = n,
// where p_j projects onto the span of the first c_j basis columns.
struct Flag {
    Matrix basis;           // unitary
    std::vector<int> cuts;  // starts at 0, ends at n, strictly increasing

    int blocks() const { return static_cast<int>(cuts.size()) - 1; }
    Projection projection(int j) const;  // onto first cuts[j] columns
};

// Validates unitarity and the cut sequence.
Flag make_flag(Matrix basis, std::vector<int> cuts);

// residual = ||(I-P) t P||_F / max(1, ||t||_F); invariant iff residual <= tol
std::pair<bool, double> is_invariant(const Matrix& t, const Projection& p, double tol);

// Compression of t to range(P) in the frame coordinates: rank x rank.
Matrix corner(const Matrix& t, const Projection& p);

// Lifts a rank x rank block back to ambient coordinates (zero elsewhere).
Matrix embed_corner(const Matrix& block, const Projection& p);

// For invariant p with both diagonal corners invertible, assembles the
// inverse from the 2x2 block-triangular formula
//   [[a, b], [0, c]]^{-1} = [[a^{-1}, -a^{-1} b c^{-1}], [0, c^{-1}]]
// in frame coordinates and conjugates back.  Throws NotInvariant (tolerance
// 1e-8) or SingularCorner naming the offending corner.
Matrix block_inverse(const Matrix& t, const Projection& p);

// Conditional expectation onto the block algebra of the flag: in the flag
// basis, keeps the diagonal blocks determined by cuts and zeroes the rest.
Matrix exp_onto_blocks(const Matrix& t, const Flag& f);

// Trace-preserving expectation onto the span of the flag projections: each
// diagonal block collapses to (normalized block trace) * identity.  For the
// maximal flag this is the diagonal part in the flag basis.
Matrix exp_onto_flag_algebra(const Matrix& t, const Flag& f);

}  // namespace utf
