#include "utf/tracial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "utf/errors.hpp"
#include "utf/holo.hpp"
#include "utf/linalg.hpp"

namespace utf {

namespace {

// Transitive-closure merge of weighted points within tol; each cluster
// collapses to its weight-centroid.  Output sorted by (re, im).
std::vector<BrownAtom> merge_atoms(std::vector<Complex> locs, std::vector<long long> weights,
                                   long long den, double tol) {
    const std::size_t n = locs.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(locs[i] - locs[j]) <= tol) {
                const std::size_t ri = find(i);
                const std::size_t rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
    std::vector<BrownAtom> atoms;
    for (std::size_t r = 0; r < n; ++r) {
        if (find(r) != r) continue;
        Complex centroid(0.0, 0.0);
        long long w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (find(i) == r) {
                centroid += static_cast<double>(weights[i]) * locs[i];
                w += weights[i];
            }
        atoms.push_back({centroid / static_cast<double>(w), w, den});
    }
    std::sort(atoms.begin(), atoms.end(), [](const BrownAtom& a, const BrownAtom& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return atoms;
}

}  // namespace

BrownMeasure brown_measure(const Matrix& t) {
    const std::vector<Complex> eigs = eigenvalues(t);
    const double tol = 1e-9 * std::max(1.0, t.frobenius_norm());
    std::vector<long long> weights(eigs.size(), 1);
    return {merge_atoms(eigs, weights, t.dim(), tol)};
}

BrownMeasure pushforward(const BrownMeasure& mu, const HoloFunction& h) {
    std::vector<Complex> locs;
    std::vector<long long> weights;
    double scale = 1.0;
    for (const BrownAtom& a : mu.atoms) {
        if (h.distance_to_singularity(a.location) <= 1e-9)
            throw SingularityHit("measure atom sits on a singularity of the function");
        const Complex v = h.eval(a.location);  // SingularityHit if non-finite
        locs.push_back(v);
        weights.push_back(a.num);
        scale = std::max(scale, std::abs(v));
    }
    return {merge_atoms(std::move(locs), std::move(weights), mu.total_den(), 1e-9 * scale)};
}

double match_distance(const BrownMeasure& a, const BrownMeasure& b) {
    std::vector<Complex> xa, xb;
    for (const BrownAtom& at : a.atoms) xa.insert(xa.end(), static_cast<std::size_t>(at.num), at.location);
    for (const BrownAtom& at : b.atoms) xb.insert(xb.end(), static_cast<std::size_t>(at.num), at.location);
    return match_distance(xa, xb);
}

double fk_determinant(const Matrix& t) {
    const std::vector<double> sv = singular_values(t);
    const double smax = sv.front();
    if (smax == 0.0) return 0.0;
    double log_sum = 0.0;
    for (double s : sv) {
        if (s <= 1e-14 * smax) return 0.0;
        log_sum += std::log(s);
    }
    return std::exp(log_sum / static_cast<double>(t.dim()));
}

QuasinilpotencyProfile quasinilpotency_profile(const Matrix& q, int m_max) {
    if (m_max < 1) throw InvalidInput("quasinilpotency_profile needs m_max >= 1");
    QuasinilpotencyProfile out;
    out.norms.reserve(static_cast<std::size_t>(m_max));
    Matrix p = q;
    for (int m = 1; m <= m_max; ++m) {
        out.norms.push_back(std::pow(operator_norm(p), 1.0 / m));
        if (m < m_max) p = p * q;  // exact zeros propagate, so nilpotent powers hit 0 exactly
    }
    return out;
}

NilpotencyWitness is_nilpotent(const Matrix& q, double tol) {
    if (tol <= 0.0) throw InvalidInput("is_nilpotent needs tol > 0");
    const double rad = spectral_radius(q);
    const int n = q.dim();
    Matrix p = Matrix::identity(n);
    Matrix sq = q;
    int e = n;
    while (e > 0) {  // q^n by binary powering
        if (e & 1) p = p * sq;
        e >>= 1;
        if (e) sq = sq * sq;
    }
    const double root = std::pow(operator_norm(p), 1.0 / n);
    return {rad <= tol * std::max(1.0, q.frobenius_norm()), rad, root};
}

}  // namespace utf
