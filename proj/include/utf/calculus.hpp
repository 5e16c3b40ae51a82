#pragma once

#include <vector>

#include "utf/holo.hpp"
#include "utf/matrix.hpp"

namespace utf {

struct Circle {
    Complex center;
    double radius;
    int nodes;  // quadrature nodes, >= 16
};

// Positively oriented union of circles.  Valid when the circles are pairwise
// disjoint, wind once around every required spectral point, wind zero times
// around every singularity of the function, and stay clear of branch cuts.
struct Contour {
    std::vector<Circle> circles;
};

// Total winding number about a point (1 per circle strictly containing it).
int winding_number(const Contour& c, Complex p);

// Builds a validated contour around spectrum_points avoiding the singularities
// of h: first a single circle at the centroid with radius 1.25 * the largest
// point distance; if a singularity violates the 10% radius margin, points are
// split into greedily grown clusters with per-cluster circles.  Throws
// NoValidContour when no separation exists (e.g. a singularity within 1e-6
// of a spectrum point, or singularities that cannot be located).
Contour auto_contour(const std::vector<Complex>& spectrum_points, const HoloFunction& h, int nodes);

// Trapezoidal contour quadrature of the resolvent integral
//   (1/M) sum_k h(l_k) (l_k - center) (l_k - t)^{-1},  l_k on each circle,
// evaluated in Schur coordinates (one factorization, triangular resolvents).
// Validates the contour against the computed spectrum and the singularities
// of h (NoValidContour) and refuses nodes that graze the spectrum within
// 1e-6 * radius (SingularResolvent).  Summation order is fixed: nodes are
// accumulated into 32-node block partial sums, blocks and circles added in
// declared order, so the result is byte-stable under any parallel schedule.
Matrix calc_contour(const Matrix& t, const HoloFunction& h, const Contour& c);

// Same quadrature for the two-sided kernel h(l) (l - t)^{-1} (l - s)^{-1},
// the coefficient operator in the commuting-perturbation factorization.
Matrix calc_pair_contour(const Matrix& t, const Matrix& s, const HoloFunction& h,
                         const Contour& c);

// Schur-Parlett evaluation: triangularize, apply h to the diagonal,
// propagate off-diagonal blocks through the Sylvester recurrence
// F R = R F.  Eigenvalues within 1e-7 * max(1, ||t||_F) (transitively) are
// grouped; each group's diagonal block is evaluated by Horner (polynomial h)
// or a truncated Taylor expansion about the cluster mean (degree =
// block size + 4; ClusterTooLarge beyond size 8 for non-polynomial h).
Matrix calc_triangular(const Matrix& t, const HoloFunction& h);

// Diagonalizes a normal matrix (NotNormal if ||n*n - nn*||_F exceeds
// 1e-8 * ||n||_F^2) and applies h to the eigenvalues.
Matrix calc_normal(const Matrix& n_matrix, const HoloFunction& h);

}  // namespace utf
