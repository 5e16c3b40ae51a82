#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "utf/errors.hpp"
#include "utf/generators.hpp"
#include "utf/linalg.hpp"
#include "utf/matrix.hpp"
#include "utf/rng.hpp"

using utf::Complex;
using utf::Matrix;

TEST_CASE("matrix arithmetic basics") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const Matrix b = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});

    const Matrix sum = a + b;
    CHECK(sum(0, 0) == Complex(1.0));
    CHECK(sum(0, 1) == Complex(3.0));

    const Matrix prod = a * b;
    CHECK(prod(0, 0) == Complex(2.0));
    CHECK(prod(0, 1) == Complex(1.0));
    CHECK(prod(1, 0) == Complex(4.0));
    CHECK(prod(1, 1) == Complex(3.0));

    CHECK(a.trace() == Complex(5.0));
    CHECK(a.normalized_trace() == Complex(2.5));
    CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(30.0)));
    CHECK(a.max_abs() == doctest::Approx(4.0));

    const Matrix c = Matrix::from_rows({{Complex(0.0, 1.0)}});
    CHECK(c.adjoint()(0, 0) == Complex(0.0, -1.0));

    const Matrix s = utf::shift(a, Complex(1.0));
    CHECK(s(0, 0) == Complex(0.0));
    CHECK(s(1, 1) == Complex(3.0));
}

TEST_CASE("solve and inverse against a hand-computed triangular system") {
    const Matrix t = Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}});
    const Matrix inv = utf::solve(t, Matrix::identity(2));
    CHECK(std::abs(inv(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(inv(0, 1) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(inv(1, 0)) < 1e-15);
    CHECK(std::abs(inv(1, 1) - Complex(0.5)) < 1e-15);

    utf::Rng rng(11);
    const Matrix g = utf::gen_spectral(6, rng);
    CHECK(testutil::diff_norm(utf::inverse(g) * g, Matrix::identity(6)) < 1e-11);

    CHECK_THROWS_AS(utf::inverse(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}})),
                    utf::SingularMatrix);
}

TEST_CASE("determinant, singular values, and norms on frozen values") {
    const Matrix t = Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}});
    CHECK(std::abs(utf::determinant(t) - Complex(2.0)) < 1e-14);

    // Singular values of [[1,1],[0,2]]: sigma^2 = 3 +- sqrt(5).
    const std::vector<double> sv = utf::singular_values(t);
    REQUIRE(sv.size() == 2);
    CHECK(sv[0] == doctest::Approx(std::sqrt(3.0 + std::sqrt(5.0))).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(std::sqrt(3.0 - std::sqrt(5.0))).epsilon(1e-12));
    CHECK(sv[0] * sv[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(utf::operator_norm(t) == doctest::Approx(sv[0]).epsilon(1e-12));
    CHECK(utf::spectral_radius(t) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues are reported in modulus-then-argument order") {
    const std::vector<Complex> e =
        utf::eigenvalues(Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}}));
    REQUIRE(e.size() == 2);
    CHECK(std::abs(e[0] - Complex(1.0)) < 1e-12);
    CHECK(std::abs(e[1] - Complex(2.0)) < 1e-12);
}

TEST_CASE("schur form: unitary factor, triangular factor, reconstruction, ordering") {
    utf::Rng rng(3);
    for (const int n : {4, 8}) {
        const Matrix t = utf::gen_spectral(n, rng);
        const utf::SchurForm f = utf::schur(t, utf::OrderingTag::modulus_then_argument());

        CHECK(testutil::unitary_defect(f.u) < 1e-12 * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == Complex(0.0));
        CHECK(testutil::diff_norm(f.u * f.r * f.u.adjoint(), t) < 1e-11 * t.frobenius_norm());

        const std::vector<Complex> d = f.diagonal();
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            CHECK(std::abs(d[i]) <= std::abs(d[i + 1]) + 1e-9 * t.frobenius_norm());
    }
}

TEST_CASE("schur handles near-defective spectra") {
    utf::Rng rng(19);
    const Matrix t = utf::gen_near_defective(6, rng);
    const utf::SchurForm f = utf::schur(t, utf::OrderingTag::modulus_then_argument());
    CHECK(testutil::diff_norm(f.u * f.r * f.u.adjoint(), t) < 1e-10 * t.frobenius_norm());
    CHECK(utf::match_distance(f.diagonal(), utf::eigenvalues(t)) < 1e-9);
}

TEST_CASE("schur_reorder permutes the diagonal while preserving the form") {
    utf::Rng rng(5);
    const Matrix t = utf::gen_spectral(5, rng);
    utf::SchurForm f = utf::schur(t, utf::OrderingTag::modulus_then_argument());
    const std::vector<Complex> before = f.diagonal();

    const std::vector<int> target = {4, 2, 0, 1, 3};
    utf::schur_reorder(f, target);

    CHECK(testutil::unitary_defect(f.u) < 1e-12 * 5);
    CHECK(testutil::diff_norm(f.u * f.r * f.u.adjoint(), t) < 1e-10 * t.frobenius_norm());
    const std::vector<Complex> after = f.diagonal();
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(after[i] - before[target[i]]) < 1e-8 * t.frobenius_norm());
}

TEST_CASE("ordering tags differ on spectra where modulus and real part disagree") {
    const Matrix t = Matrix::diagonal({Complex(-2.0), Complex(1.0)});
    const auto by_modulus = utf::schur(t, utf::OrderingTag::modulus_then_argument()).diagonal();
    CHECK(std::abs(by_modulus[0] - Complex(1.0)) < 1e-14);
    CHECK(std::abs(by_modulus[1] - Complex(-2.0)) < 1e-14);

    const auto by_real = utf::schur(t, utf::OrderingTag::real_then_imag()).diagonal();
    CHECK(std::abs(by_real[0] - Complex(-2.0)) < 1e-14);
    CHECK(std::abs(by_real[1] - Complex(1.0)) < 1e-14);

    CHECK(utf::OrderingTag::modulus_then_argument().name() == "modulus");
    CHECK(utf::OrderingTag::real_then_imag().name() == "real");
}

TEST_CASE("hermitian eigendecomposition and PSD powers") {
    const Matrix h = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const auto [v, w] = utf::hermitian_eigen(h);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(testutil::unitary_defect(v) < 1e-12);
    CHECK(testutil::diff_norm(v * Matrix::diagonal({w[0], w[1]}) * v.adjoint(), h) < 1e-12);

    const Matrix root = utf::psd_power(Matrix::diagonal({Complex(4.0), Complex(9.0)}), 0.5);
    CHECK(std::abs(root(0, 0) - Complex(2.0)) < 1e-12);
    CHECK(std::abs(root(1, 1) - Complex(3.0)) < 1e-12);
}

TEST_CASE("condition factor is 1 + kappa, capped") {
    CHECK(utf::cond_factor(Matrix::identity(3)) == doctest::Approx(4.0).epsilon(1e-6));
    const Matrix bad = Matrix::diagonal({Complex(1.0), Complex(1e-9)});
    CHECK(utf::cond_factor(bad) == doctest::Approx(1e6));
}

TEST_CASE("eigenvalue multiset matching distance") {
    const std::vector<Complex> a = {Complex(1.0), Complex(2.0), Complex(3.0)};
    const std::vector<Complex> b = {Complex(3.0), Complex(1.0), Complex(2.0)};
    CHECK(utf::match_distance(a, b) == doctest::Approx(0.0));

    const std::vector<Complex> c = {Complex(3.0), Complex(1.0 + 1e-7), Complex(2.0)};
    CHECK(utf::match_distance(a, c) == doctest::Approx(1e-7).epsilon(1e-6));

    const std::vector<Complex> d = {Complex(1.0)};
    CHECK(std::isinf(utf::match_distance(a, d)));
}
