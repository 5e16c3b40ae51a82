#include "utf/decomp.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "utf/errors.hpp"

namespace utf {

Flag hs_flag(const Matrix& t, const OrderingTag& order) {
    const SchurForm f = schur(t, order);
    std::vector<int> cuts(static_cast<std::size_t>(t.dim()) + 1);
    std::iota(cuts.begin(), cuts.end(), 0);
    return make_flag(f.u, std::move(cuts));
}

Decomposition decompose(const Matrix& t, const OrderingTag& order) {
    const SchurForm f = schur(t, order);
    const int n = t.dim();
    std::vector<int> cuts(static_cast<std::size_t>(n) + 1);
    std::iota(cuts.begin(), cuts.end(), 0);
    Flag flag = make_flag(f.u, std::move(cuts));

    const Matrix n_part = f.u * Matrix::diagonal(f.diagonal()) * f.u.adjoint();
    return Decomposition{n_part, t - n_part, std::move(flag), order};
}

Matrix multiplicative_form(const Decomposition& d) {
    const Matrix t = d.n_part + d.q_part;
    const int n = t.dim();
    const double scale = t.frobenius_norm();
    const Matrix& u = d.flag.basis;

    // eigenvalues of N are its diagonal in the flag basis
    const Matrix nc = u.adjoint() * d.n_part * u;
    double min_abs = std::abs(nc(0, 0));
    for (int i = 1; i < n; ++i) min_abs = std::min(min_abs, std::abs(nc(i, i)));
    if (min_abs < 1e-8 * scale)
        throw ZeroInSupport("normal part has an eigenvalue of magnitude " +
                            std::to_string(min_abs) +
                            "; the multiplicative form needs it invertible");

    // X = D^{-1} Q in flag coordinates; Q is strictly upper there up to
    // roundoff, and the truncation keeps X exactly strictly upper
    const Matrix qc = u.adjoint() * d.q_part * u;
    Matrix x(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) x(i, j) = qc(i, j) / nc(i, i);
    return u * x * u.adjoint();
}

}  // namespace utf
