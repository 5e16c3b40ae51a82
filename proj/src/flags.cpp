#include "utf/flags.hpp"

#include <cmath>
#include <string>

#include "utf/errors.hpp"
#include "utf/linalg.hpp"

namespace utf {

namespace {

void check_unitary(const Matrix& u, const char* what) {
    const int n = u.dim();
    const double defect = (u.adjoint() * u - Matrix::identity(n)).frobenius_norm();
    if (defect > 1e-12 * std::max(1.0, std::sqrt(static_cast<double>(n))))
        throw InvalidInput(std::string(what) + " is not unitary (defect " +
                           std::to_string(defect) + ")");
}

// m holds t in frame coordinates; copies the [r0,r1) x [c0,c1) block.
Matrix frame_coords(const Matrix& t, const Matrix& frame) {
    return frame.adjoint() * t * frame;
}

}  // namespace

Projection::Projection(const Matrix& p) : p_(p) {
    const int n = p.dim();
    if ((p - p.adjoint()).frobenius_norm() > 1e-12 * std::max(1.0, p.frobenius_norm()))
        throw InvalidInput("projection matrix is not Hermitian");
    if ((p * p - p).frobenius_norm() > 1e-10)
        throw InvalidInput("projection matrix is not idempotent");
    const double tr = p.trace().real();
    rank_ = static_cast<int>(std::lround(tr));
    if (std::abs(tr - rank_) > 1e-8 || rank_ < 0 || rank_ > n)
        throw InvalidInput("projection trace is not a valid rank");
    // Hermitian eigenvectors, eigenvalues ascending (zeros first, then ones):
    // take the last rank_ columns as the range basis, the rest as complement.
    auto [v, vals] = hermitian_eigen(p);
    (void)vals;
    frame_ = Matrix(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < rank_; ++j) frame_(i, j) = v(i, n - rank_ + j);
        for (int j = rank_; j < n; ++j) frame_(i, j) = v(i, j - rank_);
    }
}

Projection Projection::onto_first_columns(const Matrix& basis, int k) {
    check_unitary(basis, "projection basis");
    const int n = basis.dim();
    if (k < 0 || k > n) throw InvalidInput("projection rank out of range");
    Projection out;
    out.frame_ = basis;
    out.rank_ = k;
    out.p_ = Matrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s(0.0, 0.0);
            for (int c = 0; c < k; ++c) s += basis(i, c) * std::conj(basis(j, c));
            out.p_(i, j) = s;
        }
    return out;
}

Projection Projection::complement() const {
    const int n = p_.dim();
    Projection out;
    out.rank_ = n - rank_;
    out.p_ = Matrix::identity(n) - p_;
    out.frame_ = Matrix(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < out.rank_; ++j) out.frame_(i, j) = frame_(i, rank_ + j);
        for (int j = out.rank_; j < n; ++j) out.frame_(i, j) = frame_(i, j - out.rank_);
    }
    return out;
}

Flag make_flag(Matrix basis, std::vector<int> cuts) {
    check_unitary(basis, "flag basis");
    const int n = basis.dim();
    if (cuts.size() < 2 || cuts.front() != 0 || cuts.back() != n)
        throw InvalidInput("flag cuts must run from 0 to n");
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] <= cuts[i - 1]) throw InvalidInput("flag cuts must be strictly increasing");
    return Flag{std::move(basis), std::move(cuts)};
}

Projection Flag::projection(int j) const {
    if (j < 0 || j >= static_cast<int>(cuts.size()))
        throw InvalidInput("flag projection index out of range");
    return Projection::onto_first_columns(basis, cuts[static_cast<std::size_t>(j)]);
}

std::pair<bool, double> is_invariant(const Matrix& t, const Projection& p, double tol) {
    if (tol <= 0.0) throw InvalidInput("is_invariant needs tol > 0");
    if (!equal_dims(t, p.matrix())) throw DimensionMismatch("is_invariant dimension mismatch");
    const Matrix r = (Matrix::identity(t.dim()) - p.matrix()) * t * p.matrix();
    const double residual = r.frobenius_norm() / std::max(1.0, t.frobenius_norm());
    return {residual <= tol, residual};
}

Matrix corner(const Matrix& t, const Projection& p) {
    if (!equal_dims(t, p.matrix())) throw DimensionMismatch("corner dimension mismatch");
    const int n = t.dim();
    const int r = p.rank();
    if (r == 0) throw InvalidInput("corner of the zero projection is empty");
    const Matrix& f = p.frame();
    Matrix out(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Complex s(0.0, 0.0);
            for (int a = 0; a < n; ++a) {
                Complex row(0.0, 0.0);
                for (int b = 0; b < n; ++b) row += t(a, b) * f(b, j);
                s += std::conj(f(a, i)) * row;
            }
            out(i, j) = s;
        }
    return out;
}

Matrix embed_corner(const Matrix& block, const Projection& p) {
    const int n = p.dim();
    const int r = p.rank();
    if (block.dim() != r) throw DimensionMismatch("embedded block must match projection rank");
    const Matrix& f = p.frame();
    Matrix out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Complex s(0.0, 0.0);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) s += f(a, i) * block(i, j) * std::conj(f(b, j));
            out(a, b) = s;
        }
    return out;
}

Matrix block_inverse(const Matrix& t, const Projection& p) {
    const int n = t.dim();
    const int r = p.rank();
    if (r == 0 || r == n) throw InvalidInput("block_inverse needs a proper projection");
    auto [inv, residual] = is_invariant(t, p, 1e-8);
    if (!inv)
        throw NotInvariant("projection is not invariant (residual " + std::to_string(residual) +
                           ")");
    const Matrix m = frame_coords(t, p.frame());  // [[a, b], [0, c]] up to the residual
    Matrix a(r), c(n - r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) a(i, j) = m(i, j);
    for (int i = 0; i < n - r; ++i)
        for (int j = 0; j < n - r; ++j) c(i, j) = m(r + i, r + j);
    Matrix ainv, cinv;
    try {
        ainv = inverse(a);
    } catch (const SingularMatrix&) {
        throw SingularCorner("p t p");
    }
    try {
        cinv = inverse(c);
    } catch (const SingularMatrix&) {
        throw SingularCorner("(1-p) t (1-p)");
    }
    // top-right block: -a^{-1} b c^{-1}
    Matrix x(n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) x(i, j) = ainv(i, j);
    for (int i = 0; i < n - r; ++i)
        for (int j = 0; j < n - r; ++j) x(r + i, r + j) = cinv(i, j);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n - r; ++j) {
            Complex s(0.0, 0.0);
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < n - r; ++l) s += ainv(i, k) * m(k, r + l) * cinv(l, j);
            x(i, r + j) = -s;
        }
    return p.frame() * x * p.frame().adjoint();
}

Matrix exp_onto_blocks(const Matrix& t, const Flag& f) {
    if (!equal_dims(t, f.basis)) throw DimensionMismatch("exp_onto_blocks dimension mismatch");
    Matrix m = frame_coords(t, f.basis);
    const int n = t.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool same_block = false;
            for (int b = 0; b + 1 < static_cast<int>(f.cuts.size()); ++b) {
                const int lo = f.cuts[static_cast<std::size_t>(b)];
                const int hi = f.cuts[static_cast<std::size_t>(b) + 1];
                if (i >= lo && i < hi && j >= lo && j < hi) {
                    same_block = true;
                    break;
                }
            }
            if (!same_block) m(i, j) = Complex(0.0, 0.0);
        }
    return f.basis * m * f.basis.adjoint();
}

Matrix exp_onto_flag_algebra(const Matrix& t, const Flag& f) {
    if (!equal_dims(t, f.basis))
        throw DimensionMismatch("exp_onto_flag_algebra dimension mismatch");
    const Matrix m = frame_coords(t, f.basis);
    const int n = t.dim();
    Matrix d(n);
    for (int b = 0; b + 1 < static_cast<int>(f.cuts.size()); ++b) {
        const int lo = f.cuts[static_cast<std::size_t>(b)];
        const int hi = f.cuts[static_cast<std::size_t>(b) + 1];
        Complex tr(0.0, 0.0);
        for (int i = lo; i < hi; ++i) tr += m(i, i);
        tr /= static_cast<double>(hi - lo);
        for (int i = lo; i < hi; ++i) d(i, i) = tr;
    }
    return f.basis * d * f.basis.adjoint();
}

}  // namespace utf
