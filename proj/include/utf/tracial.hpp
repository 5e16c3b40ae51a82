#pragma once

#include <cstdint>
#include <vector>

#include "utf/matrix.hpp"

namespace utf {

class HoloFunction;

// One atom of a spectral distribution measure: an eigenvalue location with a
// rational weight num/den.  den is always the ambient dimension n, kept
// unreduced so "weights sum to 1" is an exact integer statement.
struct BrownAtom {
    Complex location;
    long long num;
    long long den;
};

struct BrownMeasure {
    std::vector<BrownAtom> atoms;  // sorted by (re, im); merged; sum(num) = den
    long long total_den() const { return atoms.empty() ? 1 : atoms.front().den; }
};

// Uniform atomic measure on the eigenvalue multiset, weight 1/n each.
// Locations within 1e-9 * max(1, ||t||_F) of each other (transitively) merge
// into one atom at their weighted centroid.
BrownMeasure brown_measure(const Matrix& t);

// Maps every atom through h, carrying weights, then merges.  Throws
// SingularityHit if an atom sits on (or within 1e-9 of) a singularity of h.
BrownMeasure pushforward(const BrownMeasure& mu, const HoloFunction& h);

// Greedy matching distance between the two expanded eigenvalue multisets
// (atoms repeated by weight numerator); infinity if total masses differ.
double match_distance(const BrownMeasure& a, const BrownMeasure& b);

// (prod singular values)^{1/n}, computed as exp(mean(log sigma)); returns 0
// when any singular value is <= 1e-14 * sigma_max (singular to this scale).
double fk_determinant(const Matrix& t);

struct QuasinilpotencyProfile {
    std::vector<double> norms;  // entry m-1 holds ||q^m||^{1/m} (operator norm)
};

QuasinilpotencyProfile quasinilpotency_profile(const Matrix& q, int m_max);

struct NilpotencyWitness {
    bool nilpotent;
    double spectral_radius;  // of q, from computed eigenvalues
    double norm_root;        // ||q^n||^{1/n}
};

// True iff spectral_radius <= tol * max(1, ||q||_F).  Note: for a matrix that
// is merely similar to a nilpotent one, computed eigenvalues scatter like
// eps^{1/n}, so callers holding a triangularizing basis should test the
// diagonal in that basis instead of relying on this ambient check at large n.
NilpotencyWitness is_nilpotent(const Matrix& q, double tol);

}  // namespace utf
