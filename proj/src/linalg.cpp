#include "utf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "utf/errors.hpp"

namespace utf {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

// Complex Givens rotation G = [[c, s], [-conj(s), c]] with c real >= 0 and
// G * (x, y)^T = (r, 0)^T.
struct Givens {
    double c;
    Complex s;
};

Givens make_givens(Complex x, Complex y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {1.0, Complex(0.0, 0.0)};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double nrm = std::hypot(ax, ay);
    return {ax / nrm, (x / ax) * (std::conj(y) / nrm)};
}

// Rows i and i+1 of m, columns [c0, c1): m <- G m.
void rotate_rows(Matrix& m, int i, const Givens& g, int c0, int c1) {
    for (int j = c0; j < c1; ++j) {
        const Complex t1 = m(i, j);
        const Complex t2 = m(i + 1, j);
        m(i, j) = g.c * t1 + g.s * t2;
        m(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
    }
}

// Columns i and i+1 of m, rows [r0, r1): m <- m G*.
void rotate_cols(Matrix& m, int i, const Givens& g, int r0, int r1) {
    for (int r = r0; r < r1; ++r) {
        const Complex t1 = m(r, i);
        const Complex t2 = m(r, i + 1);
        m(r, i) = g.c * t1 + std::conj(g.s) * t2;
        m(r, i + 1) = -g.s * t1 + g.c * t2;
    }
}

// Householder reduction to upper Hessenberg form: a = u h u*.
void hessenberg(const Matrix& a, Matrix& u, Matrix& h) {
    const int n = a.dim();
    h = a;
    u = Matrix::identity(n);
    std::vector<Complex> v;
    for (int k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;
        const int len = n - k - 1;
        v.assign(static_cast<std::size_t>(len), Complex(0.0, 0.0));
        double vnorm2 = 0.0;
        for (int i = 0; i < len; ++i) {
            v[static_cast<std::size_t>(i)] = h(k + 1 + i, k) / scale;
            vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
        }
        const double vnorm = std::sqrt(vnorm2);
        Complex phase(1.0, 0.0);
        if (v[0] != Complex(0.0, 0.0)) phase = v[0] / std::abs(v[0]);
        const Complex alpha = -phase * vnorm;
        v[0] -= alpha;
        double vv = 0.0;
        for (int i = 0; i < len; ++i) vv += std::norm(v[static_cast<std::size_t>(i)]);
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;
        // h <- P h, rows k+1..n-1
        for (int j = k; j < n; ++j) {
            Complex w(0.0, 0.0);
            for (int i = 0; i < len; ++i) w += std::conj(v[static_cast<std::size_t>(i)]) * h(k + 1 + i, j);
            w *= beta;
            for (int i = 0; i < len; ++i) h(k + 1 + i, j) -= w * v[static_cast<std::size_t>(i)];
        }
        // h <- h P, cols k+1..n-1
        for (int r = 0; r < n; ++r) {
            Complex w(0.0, 0.0);
            for (int i = 0; i < len; ++i) w += h(r, k + 1 + i) * v[static_cast<std::size_t>(i)];
            w *= beta;
            for (int i = 0; i < len; ++i) h(r, k + 1 + i) -= w * std::conj(v[static_cast<std::size_t>(i)]);
        }
        // u <- u P
        for (int r = 0; r < n; ++r) {
            Complex w(0.0, 0.0);
            for (int i = 0; i < len; ++i) w += u(r, k + 1 + i) * v[static_cast<std::size_t>(i)];
            w *= beta;
            for (int i = 0; i < len; ++i) u(r, k + 1 + i) -= w * std::conj(v[static_cast<std::size_t>(i)]);
        }
        // entries below the subdiagonal are now zero by construction
        h(k + 1, k) = alpha * scale;
        for (int i = k + 2; i < n; ++i) h(i, k) = Complex(0.0, 0.0);
    }
}

// Eigenvalue of the trailing 2x2 of the active window closest to its last
// diagonal entry (Wilkinson shift), in the cancellation-safe form.
Complex wilkinson_shift(const Matrix& h, int m) {
    const Complex a = h(m - 1, m - 1);
    const Complex b = h(m - 1, m);
    const Complex c = h(m, m - 1);
    const Complex d = h(m, m);
    const Complex mu = 0.5 * (a - d);
    Complex t = std::sqrt(mu * mu + b * c);
    if (std::abs(mu + t) < std::abs(mu - t)) t = -t;
    const Complex denom = mu + t;
    if (denom == Complex(0.0, 0.0)) return d;
    return d - (b * c) / denom;
}

// One implicit single-shift QR step on the window [lo, hi] of h; rotations
// are accumulated into u so that the outer invariant t = u h u* holds.
void qr_sweep(Matrix& h, Matrix& u, int lo, int hi, Complex sigma) {
    const int n = h.dim();
    Complex x = h(lo, lo) - sigma;
    Complex y = h(lo + 1, lo);
    for (int k = lo; k < hi; ++k) {
        const Givens g = make_givens(x, y);
        const int c0 = (k == lo) ? lo : k - 1;
        rotate_rows(h, k, g, c0, n);
        if (k > lo) h(k + 1, k - 1) = Complex(0.0, 0.0);  // bulge annihilated exactly
        rotate_cols(h, k, g, 0, std::min(k + 2, hi) + 1);
        rotate_cols(u, k, g, 0, n);
        if (k < hi - 1) {
            x = h(k + 1, k);
            y = h(k + 2, k);
        }
    }
}

struct TieClusters {
    std::vector<int> cluster_of;   // index -> cluster id
    std::vector<Complex> key_of;   // cluster id -> representative value
};

// Transitive closure of "within tol": values that chain together share a
// representative (the member with the smallest original index), so the sort
// below is a strict weak order even when keys sit on top of each other.
TieClusters tie_clusters(const std::vector<Complex>& vals, double tol) {
    const int n = static_cast<int>(vals.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(vals[static_cast<std::size_t>(i)] - vals[static_cast<std::size_t>(j)]) <= tol) {
                const int ri = find(i);
                const int rj = find(j);
                if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
            }
    TieClusters out;
    out.cluster_of.resize(static_cast<std::size_t>(n));
    std::vector<int> id_of_root(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (id_of_root[static_cast<std::size_t>(r)] < 0) {
            id_of_root[static_cast<std::size_t>(r)] = static_cast<int>(out.key_of.size());
            out.key_of.push_back(vals[static_cast<std::size_t>(r)]);  // root = smallest index
        }
        out.cluster_of[static_cast<std::size_t>(i)] = id_of_root[static_cast<std::size_t>(r)];
    }
    return out;
}

// Swap the adjacent diagonal entries at positions (i, i+1) of the triangular
// factor by a unitary similarity (the rotation taking the second eigenvector
// of the 2x2 block to e1).
void swap_adjacent(SchurForm& f, int i) {
    const int n = f.r.dim();
    const Complex a = f.r(i, i);
    const Complex b = f.r(i, i + 1);
    const Complex c = f.r(i + 1, i + 1);
    if (b == Complex(0.0, 0.0) && c == a) return;  // identical scalars
    const Givens g = make_givens(b, c - a);
    rotate_rows(f.r, i, g, i, n);
    rotate_cols(f.r, i, g, 0, i + 2);
    rotate_cols(f.u, i, g, 0, n);
    f.r(i + 1, i) = Complex(0.0, 0.0);
}

}  // namespace

OrderingTag OrderingTag::modulus_then_argument() {
    return OrderingTag("modulus", [](Complex a, Complex b) {
        const double ma = std::abs(a);
        const double mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
}

OrderingTag OrderingTag::real_then_imag() {
    return OrderingTag("real", [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

OrderingTag OrderingTag::custom(std::string name, Less less) {
    return OrderingTag(std::move(name), std::move(less));
}

std::vector<Complex> SchurForm::diagonal() const {
    std::vector<Complex> d(static_cast<std::size_t>(r.dim()));
    for (int i = 0; i < r.dim(); ++i) d[static_cast<std::size_t>(i)] = r(i, i);
    return d;
}

void schur_reorder(SchurForm& form, const std::vector<int>& target) {
    const int n = form.r.dim();
    std::vector<int> pos(static_cast<std::size_t>(n));  // original index -> current position
    std::vector<int> at(static_cast<std::size_t>(n));   // position -> original index
    std::iota(pos.begin(), pos.end(), 0);
    std::iota(at.begin(), at.end(), 0);
    for (int t = 0; t < n; ++t) {
        int p = pos[static_cast<std::size_t>(target[static_cast<std::size_t>(t)])];
        while (p > t) {
            swap_adjacent(form, p - 1);
            const int o1 = at[static_cast<std::size_t>(p - 1)];
            const int o2 = at[static_cast<std::size_t>(p)];
            std::swap(at[static_cast<std::size_t>(p - 1)], at[static_cast<std::size_t>(p)]);
            pos[static_cast<std::size_t>(o1)] = p;
            pos[static_cast<std::size_t>(o2)] = p - 1;
            --p;
        }
    }
}

SchurForm schur(const Matrix& t, const OrderingTag& order, int max_sweeps) {
    const int n = t.dim();
    if (max_sweeps <= 0) max_sweeps = 30 * n;

    SchurForm form;
    form.order = order.name();
    if (n == 1) {
        form.u = Matrix::identity(1);
        form.r = t;
        return form;
    }

    hessenberg(t, form.u, form.r);
    Matrix& h = form.r;
    const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());

    int hi = n - 1;
    int sweeps = 0;
    int since_deflation = 0;
    while (hi > 0) {
        // Find the largest window [lo, hi] with nonnegligible subdiagonals.
        int lo = hi;
        while (lo > 0) {
            double tst = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (tst == 0.0) tst = hnorm;
            if (std::abs(h(lo, lo - 1)) <= kUlp * tst) {
                h(lo, lo - 1) = Complex(0.0, 0.0);
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (sweeps >= max_sweeps)
            throw NonConvergence("QR iteration did not converge within " +
                                 std::to_string(max_sweeps) + " sweeps");
        ++sweeps;
        ++since_deflation;
        Complex sigma;
        if (since_deflation % 10 == 0) {
            // exceptional shift breaks shift cycles (nilpotent-like spectra)
            sigma = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            sigma = wilkinson_shift(h, hi);
        }
        qr_sweep(h, form.u, lo, hi, sigma);
    }

    // The iteration only touches the Hessenberg band; make R exactly
    // triangular so downstream structural arguments hold bit-for-bit.
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) h(i, j) = Complex(0.0, 0.0);

    // Reorder: tied eigenvalues (within 1e-9 * ||t||_F, transitively) keep
    // their relative order; everything else follows the ordering tag.
    const std::vector<Complex> vals = form.diagonal();
    const TieClusters tc = tie_clusters(vals, 1e-9 * t.frobenius_norm());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        const int ca = tc.cluster_of[static_cast<std::size_t>(a)];
        const int cb = tc.cluster_of[static_cast<std::size_t>(b)];
        if (ca == cb) return false;
        const Complex ka = tc.key_of[static_cast<std::size_t>(ca)];
        const Complex kb = tc.key_of[static_cast<std::size_t>(cb)];
        return order.less(ka, kb);
    });
    schur_reorder(form, idx);
    return form;
}

std::vector<Complex> eigenvalues(const Matrix& t) {
    return schur(t, OrderingTag::modulus_then_argument()).diagonal();
}

std::pair<Matrix, std::vector<double>> hermitian_eigen(const Matrix& t) {
    // Symmetrize, then reuse the Schur engine: the triangular factor of a
    // Hermitian matrix is diagonal up to roundoff, so its diagonal (real
    // parts) are the eigenvalues and u holds orthonormal eigenvectors.
    const int n = t.dim();
    Matrix hs(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            hs(i, j) = 0.5 * (t(i, j) + std::conj(t(j, i)));
    SchurForm f = schur(hs, OrderingTag::real_then_imag());
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = f.r(i, i).real();
    return {f.u, vals};
}

std::vector<double> singular_values(const Matrix& t) {
    auto [v, vals] = hermitian_eigen(t.adjoint() * t);
    (void)v;
    std::vector<double> sv(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        sv[i] = std::sqrt(std::max(vals[vals.size() - 1 - i], 0.0));
    return sv;
}

double operator_norm(const Matrix& t) { return singular_values(t).front(); }

double spectral_radius(const Matrix& t) {
    double r = 0.0;
    for (Complex z : eigenvalues(t)) r = std::max(r, std::abs(z));
    return r;
}

Matrix psd_power(const Matrix& t, double p) {
    auto [v, vals] = hermitian_eigen(t);
    const int n = t.dim();
    Matrix out(n);
    for (int k = 0; k < n; ++k) {
        const double w = std::pow(std::max(vals[static_cast<std::size_t>(k)], 0.0), p);
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const Complex vik = v(i, k);
            for (int j = 0; j < n; ++j) out(i, j) += w * vik * std::conj(v(j, k));
        }
    }
    return out;
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<int> perm;  // row permutation applied
    int sign = 1;
};

Lu factor(const Matrix& a) {
    const int n = a.dim();
    Lu f{a, std::vector<int>(static_cast<std::size_t>(n)), 1};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    const double thr = static_cast<double>(n) * kUlp * a.max_abs();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= thr)
            throw SingularMatrix("matrix is singular to working precision (pivot " +
                                 std::to_string(best) + ")");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
            f.sign = -f.sign;
        }
        const Complex d = f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const Complex m = f.lu(i, k) / d;
            f.lu(i, k) = m;
            if (m == Complex(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

Matrix solve(const Matrix& a, const Matrix& b) {
    if (!equal_dims(a, b)) throw DimensionMismatch("solve needs equal dimensions");
    const Lu f = factor(a);
    const int n = a.dim();
    Matrix x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = b(f.perm[static_cast<std::size_t>(i)], j);
    // forward substitution, unit lower triangle
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) {
            const Complex m = f.lu(i, k);
            if (m == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) x(i, j) -= m * x(k, j);
        }
    // back substitution
    for (int k = n - 1; k >= 0; --k) {
        const Complex d = f.lu(k, k);
        for (int j = 0; j < n; ++j) x(k, j) /= d;
        for (int i = 0; i < k; ++i) {
            const Complex m = f.lu(i, k);
            if (m == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) x(i, j) -= m * x(k, j);
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.dim())); }

Complex determinant(const Matrix& a) {
    Lu f;
    try {
        f = factor(a);
    } catch (const SingularMatrix&) {
        return Complex(0.0, 0.0);
    }
    Complex det(static_cast<double>(f.sign), 0.0);
    for (int i = 0; i < a.dim(); ++i) det *= f.lu(i, i);
    return det;
}

double cond_factor(const Matrix& a) {
    constexpr double kCap = 1e6;
    try {
        const Matrix inv = solve(a, Matrix::identity(a.dim()));
        const double kappa = a.frobenius_norm() * inv.frobenius_norm();
        return std::min(1.0 + kappa, kCap);
    } catch (const SingularMatrix&) {
        return kCap;
    }
}

double match_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (a[i].real() != a[j].real()) return a[i].real() < a[j].real();
        if (a[i].imag() != a[j].imag()) return a[i].imag() < a[j].imag();
        return i < j;
    });
    std::vector<bool> used(n, false);
    double worst = 0.0;
    for (const std::size_t i : order) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(a[i] - b[j]);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace utf
