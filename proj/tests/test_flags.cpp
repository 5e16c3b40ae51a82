#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "utf/errors.hpp"
#include "utf/flags.hpp"
#include "utf/generators.hpp"
#include "utf/linalg.hpp"
#include "utf/rng.hpp"

using utf::Complex;
using utf::Matrix;

TEST_CASE("projection onto leading basis columns") {
    const utf::Projection p = utf::Projection::onto_first_columns(Matrix::identity(2), 1);
    CHECK(p.rank() == 1);
    CHECK(p.dim() == 2);
    CHECK(std::abs(p.matrix()(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(p.matrix()(1, 1)) < 1e-15);

    const utf::Projection q = p.complement();
    CHECK(q.rank() == 1);
    CHECK(testutil::diff_norm(p.matrix() + q.matrix(), Matrix::identity(2)) < 1e-14);

    // Validating constructor accepts a true projection and rejects junk.
    CHECK_NOTHROW(utf::Projection(p.matrix()));
    CHECK_THROWS_AS(utf::Projection(Matrix::from_rows({{0.5, 0.5}, {0.0, 1.0}})),
                    utf::InvalidInput);
}

TEST_CASE("flag construction validates basis and cuts") {
    CHECK_NOTHROW(utf::make_flag(Matrix::identity(3), {0, 2, 3}));
    CHECK_THROWS_AS(utf::make_flag(Matrix::identity(3), {0, 2}), utf::InvalidInput);
    CHECK_THROWS_AS(utf::make_flag(Matrix::identity(3), {0, 2, 2, 3}), utf::InvalidInput);
    CHECK_THROWS_AS(utf::make_flag(Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}), {0, 1, 2}),
                    utf::InvalidInput);

    const utf::Flag f = utf::make_flag(Matrix::identity(4), {0, 1, 3, 4});
    CHECK(f.blocks() == 3);
    CHECK(f.projection(1).rank() == 1);
    CHECK(f.projection(2).rank() == 3);
}

TEST_CASE("invariance residual detects one-sided triangularity") {
    const Matrix t = Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}});
    const utf::Projection first = utf::Projection::onto_first_columns(Matrix::identity(2), 1);
    const auto [ok, res] = utf::is_invariant(t, first, 1e-10);
    CHECK(ok);
    CHECK(res == doctest::Approx(0.0));

    // The second coordinate axis is not invariant: T e2 has a first component.
    const Matrix swapped = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const utf::Projection second = utf::Projection::onto_first_columns(swapped, 1);
    const auto [ok2, res2] = utf::is_invariant(t, second, 1e-10);
    CHECK_FALSE(ok2);
    CHECK(res2 > 0.1);
}

TEST_CASE("corner compression and embedding") {
    const Matrix t = Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}});
    const utf::Projection p = utf::Projection::onto_first_columns(Matrix::identity(2), 1);

    const Matrix c = utf::corner(t, p);
    REQUIRE(c.dim() == 1);
    CHECK(std::abs(c(0, 0) - Complex(1.0)) < 1e-14);

    const Matrix lifted = utf::embed_corner(c, p);
    CHECK(lifted.dim() == 2);
    CHECK(std::abs(lifted(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(lifted(1, 1)) < 1e-15);
}

TEST_CASE("block-triangular inverse formula matches the direct inverse") {
    const Matrix t = Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}});
    const utf::Projection p = utf::Projection::onto_first_columns(Matrix::identity(2), 1);
    const Matrix bi = utf::block_inverse(t, p);
    CHECK(std::abs(bi(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(bi(0, 1) - Complex(-0.5)) < 1e-14);
    CHECK(std::abs(bi(1, 1) - Complex(0.5)) < 1e-14);

    utf::Rng rng(8);
    const Matrix g = utf::gen_triangular(5, rng);
    const utf::Projection gp = utf::Projection::onto_first_columns(Matrix::identity(5), 2);
    CHECK(testutil::diff_norm(utf::block_inverse(g, gp), utf::inverse(g)) < 1e-10);

    // Non-invariant projection is rejected.
    const Matrix swapped = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    CHECK_THROWS_AS(utf::block_inverse(t, utf::Projection::onto_first_columns(swapped, 1)),
                    utf::NotInvariant);
    // Singular leading corner is named.
    const Matrix sing = Matrix::from_rows({{0.0, 1.0}, {0.0, 2.0}});
    CHECK_THROWS_AS(utf::block_inverse(sing, p), utf::SingularCorner);
}

TEST_CASE("block expectations onto a flag") {
    const Matrix t =
        Matrix::from_rows({{1.0, 1.0, 0.0}, {0.0, 2.0, 1.0}, {0.0, 0.0, 3.0}});
    const utf::Flag f = utf::make_flag(Matrix::identity(3), {0, 2, 3});

    const Matrix blocks = utf::exp_onto_blocks(t, f);
    CHECK(std::abs(blocks(0, 1) - Complex(1.0)) < 1e-15);  // inside the first block
    CHECK(std::abs(blocks(1, 2)) < 1e-15);                 // crosses the cut: zeroed
    CHECK(std::abs(blocks(2, 2) - Complex(3.0)) < 1e-15);

    // Trace-preserving collapse: each diagonal block becomes its mean times I.
    const Matrix scalar = utf::exp_onto_flag_algebra(t, f);
    CHECK(std::abs(scalar(0, 0) - Complex(1.5)) < 1e-15);
    CHECK(std::abs(scalar(1, 1) - Complex(1.5)) < 1e-15);
    CHECK(std::abs(scalar(0, 1)) < 1e-15);
    CHECK(std::abs(scalar(2, 2) - Complex(3.0)) < 1e-15);
    CHECK(std::abs(scalar.trace() - t.trace()) < 1e-14);
}
