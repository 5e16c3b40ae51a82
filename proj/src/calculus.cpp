#include "utf/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "utf/errors.hpp"
#include "utf/linalg.hpp"

namespace utf {

namespace {

constexpr double kClusterTol = 1e-7;       // relative eigenvalue grouping
constexpr double kGrazeTol = 1e-6;         // node-to-spectrum guard, relative to radius
constexpr double kMarginFactor = 1.1;      // singularities stay outside margin * radius
constexpr int kSumBlock = 32;              // fixed partial-sum block size

bool circle_clear_of_ray(const Circle& c, Complex branch_point) {
    // the principal-branch cut {branch_point + t : t <= 0} must stay outside
    return ray_distance(branch_point, c.center) >= kMarginFactor * c.radius;
}

void validate_contour(const Contour& contour, const std::vector<Complex>& must_enclose,
                      const HoloFunction& h) {
    if (contour.circles.empty()) throw NoValidContour("contour has no circles");
    for (const Circle& c : contour.circles) {
        if (!(c.radius > 0.0)) throw NoValidContour("contour circle has nonpositive radius");
        if (c.nodes < 16) throw InvalidInput("contour circles need at least 16 nodes");
    }
    if (h.has_unlocated_singularities())
        throw NoValidContour(
            "the function has singularities that cannot be located; supply a contour manually");
    for (Complex p : must_enclose)
        if (winding_number(contour, p) != 1)
            throw NoValidContour("contour does not wind exactly once around a spectral point");
    for (Complex s : h.poles())
        if (winding_number(contour, s) != 0)
            throw NoValidContour("contour encloses a pole of the function");
    for (Complex b : h.branch_points())
        for (const Circle& c : contour.circles)
            if (!circle_clear_of_ray(c, b))
                throw NoValidContour("contour crosses a branch cut of the function");
}

// Back-substitution inverse of the upper triangular (lambda I - r); result
// accumulated into acc with coefficient w.
void add_scaled_triangular_resolvent(Matrix& acc, const Matrix& r, Complex lambda, Complex w) {
    const int n = r.dim();
    std::vector<Complex> col(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        col[static_cast<std::size_t>(j)] = 1.0 / (lambda - r(j, j));
        for (int i = j - 1; i >= 0; --i) {
            Complex s(0.0, 0.0);
            for (int k = i + 1; k <= j; ++k) s += -r(i, k) * col[static_cast<std::size_t>(k)];
            col[static_cast<std::size_t>(i)] = -s / (lambda - r(i, i));
        }
        for (int i = 0; i <= j; ++i) acc(i, j) += w * col[static_cast<std::size_t>(i)];
    }
}

std::vector<Complex> circle_nodes(const Circle& c) {
    std::vector<Complex> nodes(static_cast<std::size_t>(c.nodes));
    for (int k = 0; k < c.nodes; ++k) {
        const double th = 2.0 * std::numbers::pi * k / c.nodes;
        nodes[static_cast<std::size_t>(k)] =
            c.center + c.radius * Complex(std::cos(th), std::sin(th));
    }
    return nodes;
}

void check_node_grazing(const std::vector<Complex>& nodes, double radius,
                        const std::vector<Complex>& eigs) {
    for (Complex lk : nodes)
        for (Complex e : eigs)
            if (std::abs(lk - e) < kGrazeTol * radius)
                throw SingularResolvent(
                    "quadrature node grazes the spectrum; perturb the contour radius");
}

struct ClusterPartition {
    std::vector<int> target;  // reorder permutation grouping clusters contiguously
    std::vector<int> sizes;   // cluster sizes in placement order
};

ClusterPartition cluster_eigenvalues(const std::vector<Complex>& eigs, double tol) {
    const int n = static_cast<int>(eigs.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(eigs[static_cast<std::size_t>(i)] - eigs[static_cast<std::size_t>(j)]) <=
                tol) {
                const int ri = find(i);
                const int rj = find(j);
                if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
            }
    ClusterPartition out;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (seen[static_cast<std::size_t>(r)]) continue;
        seen[static_cast<std::size_t>(r)] = true;
        int size = 0;
        for (int j = i; j < n; ++j)
            if (find(j) == r) {
                out.target.push_back(j);
                ++size;
            }
        out.sizes.push_back(size);
    }
    return out;
}

void check_function_defined_on(const HoloFunction& h, const std::vector<Complex>& eigs) {
    for (Complex e : eigs) {
        if (h.distance_to_singularity(e) <= 1e-8 * std::max(1.0, std::abs(e)))
            throw SingularityHit("the function is singular at an eigenvalue");
        (void)h.eval(e);  // throws SingularityHit when not finite
    }
}

}  // namespace

int winding_number(const Contour& c, Complex p) {
    int w = 0;
    for (const Circle& circ : c.circles)
        if (std::abs(p - circ.center) < circ.radius) ++w;
    return w;
}

// ---------------------------------------------------------------------------
// automatic contour construction
// ---------------------------------------------------------------------------

namespace {

struct CandidateCircle {
    Complex center;
    double radius;
    bool feasible;
};

CandidateCircle fit_circle(const std::vector<Complex>& pts, const HoloFunction& h) {
    Complex center(0.0, 0.0);
    for (Complex p : pts) center += p;
    center /= static_cast<double>(pts.size());
    double maxd = 0.0;
    for (Complex p : pts) maxd = std::max(maxd, std::abs(p - center));

    double dsing = std::numeric_limits<double>::infinity();
    for (Complex s : h.poles()) dsing = std::min(dsing, std::abs(s - center));
    for (Complex b : h.branch_points()) dsing = std::min(dsing, ray_distance(b, center));

    const double rhigh = dsing / kMarginFactor;  // radius cap from the margin rule
    const double rlow = 1.05 * maxd;             // points must sit strictly inside
    if (rlow >= rhigh) return {center, 0.0, false};

    // radius 1.5 * spread keeps the node-to-eigenvalue ratio at most 2/3,
    // giving fast geometric trapezoid convergence; a tight cluster still gets
    // a radius on the scale of its location so nodes never graze the points
    double point_pref = 0.5 * std::max(1.0, std::abs(center));
    if (std::isfinite(rhigh)) point_pref = std::min(point_pref, 0.49 * rhigh);
    const double preferred = std::max(1.5 * maxd, point_pref);
    double r = std::min(preferred, 0.98 * rhigh);
    r = std::max(r, rlow);
    if (!(r > 0.0)) return {center, 0.0, false};
    return {center, r, true};
}

// Splits by the two farthest members; each point goes to the closer anchor.
std::pair<std::vector<Complex>, std::vector<Complex>> split_cluster(
    const std::vector<Complex>& pts) {
    std::size_t ia = 0, ib = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double d = std::abs(pts[i] - pts[j]);
            if (d > best) {
                best = d;
                ia = i;
                ib = j;
            }
        }
    std::vector<Complex> a, b;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(pts[i] - pts[ia]) <= std::abs(pts[i] - pts[ib]))
            a.push_back(pts[i]);
        else
            b.push_back(pts[i]);
    }
    if (a.empty() || b.empty()) {  // coincident points; cannot separate further
        a = pts;
        b.clear();
    }
    return {a, b};
}

}  // namespace

Contour auto_contour(const std::vector<Complex>& spectrum_points, const HoloFunction& h, int nodes) {
    if (spectrum_points.empty()) throw InvalidInput("auto_contour needs at least one point");
    if (nodes < 16) throw InvalidInput("auto_contour needs at least 16 nodes");
    if (h.has_unlocated_singularities())
        throw NoValidContour(
            "the function has singularities that cannot be located; supply a contour manually");
    for (Complex p : spectrum_points) {
        for (Complex s : h.poles())
            if (std::abs(p - s) < 1e-6)
                throw NoValidContour(
                    "a pole of the function is inseparable from the spectrum; supply a contour "
                    "manually");
        for (Complex b : h.branch_points())
            if (ray_distance(b, p) < 1e-6)
                throw NoValidContour(
                    "a branch cut of the function touches the spectrum; supply a contour "
                    "manually");
    }

    std::vector<std::vector<Complex>> clusters{spectrum_points};
    const int max_rounds = 4 * static_cast<int>(spectrum_points.size()) + 8;
    for (int round = 0; round < max_rounds; ++round) {
        std::vector<CandidateCircle> circles;
        circles.reserve(clusters.size());
        int infeasible = -1;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            circles.push_back(fit_circle(clusters[i], h));
            if (!circles.back().feasible) {
                infeasible = static_cast<int>(i);
                break;
            }
        }
        if (infeasible >= 0) {
            auto& cl = clusters[static_cast<std::size_t>(infeasible)];
            if (cl.size() < 2)
                throw NoValidContour(
                    "could not separate the spectrum from the singularities; supply a contour "
                    "manually");
            auto [a, b] = split_cluster(cl);
            if (b.empty())
                throw NoValidContour(
                    "could not separate coincident spectral points from a singularity; supply a "
                    "contour manually");
            cl = a;
            clusters.insert(clusters.begin() + infeasible + 1, b);
            continue;
        }
        // merge any two clusters whose circles are not safely disjoint
        bool merged = false;
        for (std::size_t i = 0; i < clusters.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
                const double gap = std::abs(circles[i].center - circles[j].center) -
                                   circles[i].radius - circles[j].radius;
                if (gap < 0.01 * std::min(circles[i].radius, circles[j].radius)) {
                    clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
                    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                }
            }
        if (merged) continue;

        Contour out;
        for (const CandidateCircle& c : circles) out.circles.push_back({c.center, c.radius, nodes});
        validate_contour(out, spectrum_points, h);
        return out;
    }
    throw NoValidContour(
        "could not separate the spectrum from the singularities; supply a contour manually");
}

// ---------------------------------------------------------------------------
// quadrature calculi
// ---------------------------------------------------------------------------

Matrix calc_contour(const Matrix& t, const HoloFunction& h, const Contour& c) {
    const int n = t.dim();
    const SchurForm f = schur(t, OrderingTag::modulus_then_argument());
    const std::vector<Complex> eigs = f.diagonal();
    validate_contour(c, eigs, h);

    Matrix acc(n);
    for (const Circle& circ : c.circles) {
        const std::vector<Complex> nodes = circle_nodes(circ);
        check_node_grazing(nodes, circ.radius, eigs);
        // fixed 32-node partial-sum blocks: the reduction order never depends
        // on how node evaluations are scheduled
        for (std::size_t b0 = 0; b0 < nodes.size(); b0 += kSumBlock) {
            Matrix partial(n);
            const std::size_t b1 = std::min(nodes.size(), b0 + kSumBlock);
            for (std::size_t k = b0; k < b1; ++k) {
                const Complex lk = nodes[k];
                const Complex w = h.eval(lk) * (lk - circ.center) / static_cast<double>(circ.nodes);
                add_scaled_triangular_resolvent(partial, f.r, lk, w);
            }
            acc += partial;
        }
    }
    return f.u * acc * f.u.adjoint();
}

Matrix calc_pair_contour(const Matrix& t, const Matrix& s, const HoloFunction& h,
                         const Contour& c) {
    if (!equal_dims(t, s)) throw DimensionMismatch("calc_pair_contour needs equal dimensions");
    const int n = t.dim();
    std::vector<Complex> enclose = eigenvalues(t);
    {
        const std::vector<Complex> es = eigenvalues(s);
        enclose.insert(enclose.end(), es.begin(), es.end());
    }
    validate_contour(c, enclose, h);

    const Matrix id = Matrix::identity(n);
    Matrix acc(n);
    for (const Circle& circ : c.circles) {
        const std::vector<Complex> nodes = circle_nodes(circ);
        check_node_grazing(nodes, circ.radius, enclose);
        for (std::size_t b0 = 0; b0 < nodes.size(); b0 += kSumBlock) {
            Matrix partial(n);
            const std::size_t b1 = std::min(nodes.size(), b0 + kSumBlock);
            for (std::size_t k = b0; k < b1; ++k) {
                const Complex lk = nodes[k];
                const Complex w = h.eval(lk) * (lk - circ.center) / static_cast<double>(circ.nodes);
                Matrix rt, rs;
                try {
                    rt = solve(id * lk - t, id);
                    rs = solve(id * lk - s, id);
                } catch (const SingularMatrix&) {
                    throw SingularResolvent(
                        "quadrature node grazes the spectrum; perturb the contour radius");
                }
                partial += (rt * rs) * w;
            }
            acc += partial;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// triangular (Schur-Parlett) calculus
// ---------------------------------------------------------------------------

namespace {

// h(block) for an upper triangular block taken from rows/cols [lo, lo+k) of r.
Matrix evaluate_diagonal_block(const Matrix& r, int lo, int k, const HoloFunction& h) {
    Matrix block(k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) block(i, j) = r(lo + i, lo + j);
    if (k == 1) {
        Matrix out(1);
        out(0, 0) = h.eval(block(0, 0));
        return out;
    }
    const Matrix id = Matrix::identity(k);
    if (h.is_polynomial()) {
        const std::vector<Complex>& cs = h.poly_coeffs();
        Matrix acc = id * cs.back();
        for (std::size_t j = cs.size() - 1; j-- > 0;) acc = acc * block + id * cs[j];
        return acc;
    }
    if (k > 8)
        throw ClusterTooLarge("eigenvalue cluster of size " + std::to_string(k) +
                              " needs a polynomial function (limit 8)");
    Complex mu(0.0, 0.0);
    for (int i = 0; i < k; ++i) mu += block(i, i);
    mu /= static_cast<double>(k);
    const int deg = k + 4;
    const std::vector<Complex> jet = h.taylor_jet(mu, deg);
    const Matrix shifted = shift(block, mu);
    Matrix acc = id * jet[static_cast<std::size_t>(deg)];
    for (int j = deg - 1; j >= 0; --j) acc = acc * shifted + id * jet[static_cast<std::size_t>(j)];
    return acc;
}

}  // namespace

Matrix calc_triangular(const Matrix& t, const HoloFunction& h) {
    const int n = t.dim();
    SchurForm f = schur(t, OrderingTag::modulus_then_argument());
    check_function_defined_on(h, f.diagonal());

    const double scale = std::max(1.0, t.frobenius_norm());
    const ClusterPartition part = cluster_eigenvalues(f.diagonal(), kClusterTol * scale);
    schur_reorder(f, part.target);

    std::vector<int> lo_of_block(part.sizes.size() + 1, 0);
    for (std::size_t b = 0; b < part.sizes.size(); ++b)
        lo_of_block[b + 1] = lo_of_block[b] + part.sizes[b];
    const int nblocks = static_cast<int>(part.sizes.size());
    const Matrix& r = f.r;

    Matrix fn(n);
    for (int b = 0; b < nblocks; ++b) {
        const int lo = lo_of_block[static_cast<std::size_t>(b)];
        const int k = part.sizes[static_cast<std::size_t>(b)];
        const Matrix blk = evaluate_diagonal_block(r, lo, k, h);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) fn(lo + i, lo + j) = blk(i, j);
    }

    // Parlett recurrence, one superdiagonal of blocks at a time:
    //   R_II X - X R_JJ = F_II R_IJ - R_IJ F_JJ + sum_K (F_IK R_KJ - R_IK F_KJ)
    for (int sep = 1; sep < nblocks; ++sep) {
        for (int bi = 0; bi + sep < nblocks; ++bi) {
            const int bj = bi + sep;
            const int li = lo_of_block[static_cast<std::size_t>(bi)];
            const int p = part.sizes[static_cast<std::size_t>(bi)];
            const int lj = lo_of_block[static_cast<std::size_t>(bj)];
            const int q = part.sizes[static_cast<std::size_t>(bj)];
            std::vector<Complex> cmat(static_cast<std::size_t>(p) * q, Complex(0.0, 0.0));
            auto cref = [&](int i, int j) -> Complex& {
                return cmat[static_cast<std::size_t>(i) * q + j];
            };
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j) {
                    Complex sum(0.0, 0.0);
                    // F_II R_IJ - R_IJ F_JJ
                    for (int k = 0; k < p; ++k) sum += fn(li + i, li + k) * r(li + k, lj + j);
                    for (int k = 0; k < q; ++k) sum -= r(li + i, lj + k) * fn(lj + k, lj + j);
                    // interior blocks
                    for (int bk = bi + 1; bk < bj; ++bk) {
                        const int lk = lo_of_block[static_cast<std::size_t>(bk)];
                        const int m = part.sizes[static_cast<std::size_t>(bk)];
                        for (int k = 0; k < m; ++k) {
                            sum += fn(li + i, lk + k) * r(lk + k, lj + j);
                            sum -= r(li + i, lk + k) * fn(lk + k, lj + j);
                        }
                    }
                    cref(i, j) = sum;
                }
            // solve R_II X - X R_JJ = C column by column (back substitution;
            // diagonal separations are at least the clustering tolerance)
            for (int j = 0; j < q; ++j) {
                for (int d = 0; d < j; ++d) {
                    const Complex w = r(lj + d, lj + j);
                    if (w == Complex(0.0, 0.0)) continue;
                    for (int i = 0; i < p; ++i) cref(i, j) += fn(li + i, lj + d) * w;
                }
                for (int i = p - 1; i >= 0; --i) {
                    Complex s = cref(i, j);
                    for (int k = i + 1; k < p; ++k) s -= r(li + i, li + k) * fn(li + k, lj + j);
                    fn(li + i, lj + j) = s / (r(li + i, li + i) - r(lj + j, lj + j));
                }
            }
        }
    }
    return f.u * fn * f.u.adjoint();
}

Matrix calc_normal(const Matrix& n_matrix, const HoloFunction& h) {
    const double norm2 = n_matrix.frobenius_norm() * n_matrix.frobenius_norm();
    const double defect =
        (n_matrix.adjoint() * n_matrix - n_matrix * n_matrix.adjoint()).frobenius_norm();
    if (defect > 1e-8 * norm2)
        throw NotNormal("matrix is not normal (commutator defect " + std::to_string(defect) + ")");
    const SchurForm f = schur(n_matrix, OrderingTag::modulus_then_argument());
    const std::vector<Complex> eigs = f.diagonal();
    check_function_defined_on(h, eigs);
    std::vector<Complex> mapped(eigs.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) mapped[i] = h.eval(eigs[i]);
    return f.u * Matrix::diagonal(mapped) * f.u.adjoint();
}

}  // namespace utf
