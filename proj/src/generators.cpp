#include "utf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "utf/errors.hpp"

namespace utf {

namespace {

// Jittered grid of moduli in [lo, hi]: consecutive values stay at least
// 0.2 * (hi - lo) / count apart, so eigenvalue clusters are intentional,
// never accidental.
std::vector<double> separated_moduli(int count, double lo, double hi, Rng& rng) {
    std::vector<double> m(static_cast<std::size_t>(count));
    const double step = (hi - lo) / count;
    for (int k = 0; k < count; ++k)
        m[static_cast<std::size_t>(k)] = lo + (k + 0.1 + 0.8 * rng.uniform01()) * step;
    return m;
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
        std::swap(v[static_cast<std::size_t>(i)],
                  v[static_cast<std::size_t>(rng.uniform_int(0, i))]);
}

Matrix build_triangular(const std::vector<Complex>& diag, double upper_scale, Rng& rng) {
    const int n = static_cast<int>(diag.size());
    Matrix t(n);
    for (int i = 0; i < n; ++i) t(i, i) = diag[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t(i, j) = upper_scale * rng.gaussian();
    return t;
}

}  // namespace

Matrix haar_unitary(int n, Rng& rng) {
    if (n < 1) throw InvalidInput("haar_unitary needs n >= 1");
    std::vector<std::vector<Complex>> cols(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& v = cols[static_cast<std::size_t>(j)];
        double nrm = 0.0;
        do {
            v.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = rng.gaussian();
            // two rounds of modified Gram-Schmidt for orthogonality to
            // working precision
            for (int round = 0; round < 2; ++round)
                for (int k = 0; k < j; ++k) {
                    const auto& q = cols[static_cast<std::size_t>(k)];
                    Complex dot(0.0, 0.0);
                    for (int i = 0; i < n; ++i)
                        dot += std::conj(q[static_cast<std::size_t>(i)]) *
                               v[static_cast<std::size_t>(i)];
                    for (int i = 0; i < n; ++i)
                        v[static_cast<std::size_t>(i)] -= dot * q[static_cast<std::size_t>(i)];
                }
            nrm = 0.0;
            for (int i = 0; i < n; ++i) nrm += std::norm(v[static_cast<std::size_t>(i)]);
            nrm = std::sqrt(nrm);
        } while (nrm < 1e-8);  // essentially impossible; redraw keeps determinism
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] /= nrm;
    }
    Matrix u(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) u(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return u;
}

Matrix gen_triangular(int n, Rng& rng) {
    if (n < 1) throw InvalidInput("gen_triangular needs n >= 1");
    const std::vector<double> moduli = separated_moduli(n, 0.25, 1.5, rng);
    std::vector<Complex> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        diag[static_cast<std::size_t>(i)] = moduli[static_cast<std::size_t>(i)] * rng.unit_phase();
    shuffle_in_place(diag, rng);
    return build_triangular(diag, 0.5 / std::sqrt(static_cast<double>(n)), rng);
}

Matrix gen_spectral(int n, Rng& rng) {
    const Matrix t = gen_triangular(n, rng);
    const Matrix u = haar_unitary(n, rng);
    return u * t * u.adjoint();
}

std::pair<Matrix, Matrix> gen_commuting_pair(int n, Rng& rng) {
    if (n < 1) throw InvalidInput("gen_commuting_pair needs n >= 1");
    std::vector<int> sizes;
    int remaining = n;
    while (remaining > 0) {
        // lead with a 2-block so the nilpotent part is never trivial
        const bool two = remaining >= 2 && (sizes.empty() || rng.uniform01() < 0.6);
        sizes.push_back(two ? 2 : 1);
        remaining -= sizes.back();
    }
    const int nblocks = static_cast<int>(sizes.size());
    const std::vector<double> moduli = separated_moduli(nblocks, 0.3, 1.2, rng);

    Matrix nc(n), qc(n);
    int at = 0;
    for (int b = 0; b < nblocks; ++b) {
        const Complex lambda = moduli[static_cast<std::size_t>(b)] * rng.unit_phase();
        for (int i = 0; i < sizes[static_cast<std::size_t>(b)]; ++i) nc(at + i, at + i) = lambda;
        if (sizes[static_cast<std::size_t>(b)] == 2)
            qc(at, at + 1) = rng.uniform(0.1, 0.4) * rng.unit_phase();
        at += sizes[static_cast<std::size_t>(b)];
    }
    const Matrix u = haar_unitary(n, rng);
    return {u * nc * u.adjoint(), u * qc * u.adjoint()};
}

Matrix gen_near_defective(int n, Rng& rng) {
    if (n < 2) throw InvalidInput("gen_near_defective needs n >= 2");
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(n));
    int attempts = 0;
    while (static_cast<int>(pts.size()) < n && attempts < 20000) {
        ++attempts;
        const Complex c = rng.annulus(0.3, 1.3);
        bool ok = true;
        for (Complex p : pts)
            if (std::abs(c - p) < 0.05) {
                ok = false;
                break;
            }
        if (ok) pts.push_back(c);
    }
    while (static_cast<int>(pts.size()) < n) {  // deterministic fallback grid
        const int k = static_cast<int>(pts.size());
        pts.push_back((0.3 + k * (1.0 / n)) * rng.unit_phase());
    }
    // plant the near-defective pair: overwrite the second point
    const double gap = std::pow(10.0, rng.uniform(-4.0, -2.0));
    pts[1] = pts[0] + gap * rng.unit_phase();

    const Matrix t = build_triangular(pts, 0.3, rng);
    const Matrix u = haar_unitary(n, rng);
    return u * t * u.adjoint();
}

Matrix generate(const std::string& kind, int n, Rng& rng) {
    if (kind == "triangular") return gen_triangular(n, rng);
    if (kind == "spectral") return gen_spectral(n, rng);
    if (kind == "near-defective") return gen_near_defective(n, rng);
    throw InvalidInput("unknown generator kind '" + kind +
                       "' (expected triangular, spectral, near-defective, or commuting-pair)");
}

}  // namespace utf
