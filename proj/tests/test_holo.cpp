#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "utf/errors.hpp"
#include "utf/holo.hpp"

using utf::Complex;

namespace {
Complex ev(const std::string& src, Complex z) { return utf::parse(src).eval(z); }
}  // namespace

TEST_CASE("expression evaluation on frozen points") {
    CHECK(std::abs(ev("z^2", Complex(3.0)) - Complex(9.0)) < 1e-15);
    CHECK(std::abs(ev("z^3-2*z+1", Complex(2.0)) - Complex(5.0)) < 1e-15);
    CHECK(std::abs(ev("exp(z)", Complex(0.0)) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(ev("exp(z)", Complex(1.0)) - Complex(std::exp(1.0))) < 1e-14);
    CHECK(std::abs(ev("1/(z-3)", Complex(1.0)) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(ev("sqrt(z)", Complex(4.0)) - Complex(2.0)) < 1e-14);
    CHECK(std::abs(ev("log(z)", Complex(std::exp(2.0))) - Complex(2.0)) < 1e-14);
    CHECK(std::abs(ev("(1+2i)*z", Complex(1.0)) - Complex(1.0, 2.0)) < 1e-15);
    CHECK(std::abs(ev("z^0", Complex(7.0)) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(ev("2i", Complex(0.0)) - Complex(0.0, 2.0)) < 1e-15);
    CHECK(std::abs(ev("1.5e-3i", Complex(0.0)) - Complex(0.0, 1.5e-3)) < 1e-18);
    CHECK(std::abs(ev("z^-1", Complex(4.0)) - Complex(0.25)) < 1e-15);
}

TEST_CASE("printed form round-trips through the parser") {
    for (const std::string src :
         {"z^2", "z^3-2*z+1", "exp(z)/(z-3)", "sqrt(z+4)*log(z+9)", "(1+2i)*z^2-0.5"}) {
        const utf::HoloFunction h = utf::parse(src);
        const utf::HoloFunction back = utf::parse(h.printed());
        CHECK(back.same_tree(h));
        for (const Complex z : {Complex(0.1, 0.2), Complex(1.0, -0.3), Complex(2.5)}) {
            CHECK(std::abs(h.eval(z) - back.eval(z)) < 1e-14);
        }
    }
}

TEST_CASE("parse errors carry byte offsets; malformed inputs rejected") {
    CHECK_THROWS_AS(utf::parse("z+"), utf::ParseError);
    CHECK_THROWS_AS(utf::parse("sin(z)"), utf::ParseError);
    CHECK_THROWS_AS(utf::parse("(z"), utf::ParseError);
    CHECK_THROWS_AS(utf::parse(""), utf::ParseError);
    CHECK_THROWS_AS(utf::parse("z^1000"), utf::ParseError);
    CHECK_THROWS_AS(utf::parse("1/0"), utf::DivisionByZeroConstant);
    try {
        utf::parse("z*@");
        CHECK(false);
    } catch (const utf::ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("singularity bookkeeping: poles, branch rays, unlocated") {
    const utf::HoloFunction pole = utf::parse("1/(z-3)");
    REQUIRE(pole.poles().size() == 1);
    CHECK(std::abs(pole.poles()[0] - Complex(3.0)) < 1e-12);
    CHECK(pole.branch_points().empty());
    CHECK_FALSE(pole.has_unlocated_singularities());
    CHECK(pole.distance_to_singularity(Complex(5.0)) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pole.eval(Complex(3.0)), utf::SingularityHit);

    const utf::HoloFunction rt = utf::parse("sqrt(z)");
    REQUIRE(rt.branch_points().size() == 1);
    CHECK(std::abs(rt.branch_points()[0]) < 1e-12);
    // The cut runs left from the branch point: points on the negative axis
    // are on it, points above it are distant by their height.
    CHECK(rt.distance_to_singularity(Complex(-2.0)) == doctest::Approx(0.0));
    CHECK(rt.distance_to_singularity(Complex(-2.0, 0.7)) == doctest::Approx(0.7));
    CHECK(rt.distance_to_singularity(Complex(1.0)) == doctest::Approx(1.0));

    const utf::HoloFunction hidden = utf::parse("1/exp(z)");
    CHECK(hidden.has_unlocated_singularities());

    CHECK(utf::ray_distance(Complex(0.0), Complex(3.0)) == doctest::Approx(3.0));
    CHECK(utf::ray_distance(Complex(0.0), Complex(-3.0, 4.0)) == doctest::Approx(4.0));
}

TEST_CASE("polynomial detection and coefficients") {
    const utf::HoloFunction p = utf::parse("z^3-2*z+1");
    REQUIRE(p.is_polynomial());
    const std::vector<Complex>& c = p.poly_coeffs();
    REQUIRE(c.size() == 4);
    CHECK(std::abs(c[0] - Complex(1.0)) < 1e-15);
    CHECK(std::abs(c[1] - Complex(-2.0)) < 1e-15);
    CHECK(std::abs(c[2]) < 1e-15);
    CHECK(std::abs(c[3] - Complex(1.0)) < 1e-15);

    CHECK_FALSE(utf::parse("exp(z)").is_polynomial());
    CHECK_FALSE(utf::parse("1/(z-3)").is_polynomial());
}

TEST_CASE("taylor jets match known expansions") {
    const std::vector<Complex> je = utf::parse("exp(z)").taylor_jet(Complex(0.0), 4);
    REQUIRE(je.size() == 5);
    double fact = 1.0;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) fact *= k;
        CHECK(std::abs(je[k] - Complex(1.0 / fact)) < 1e-12);
    }

    // 1/(z-3) about 1: -(1/2) sum ((z-1)/2)^k.
    const std::vector<Complex> jr = utf::parse("1/(z-3)").taylor_jet(Complex(1.0), 3);
    REQUIRE(jr.size() == 4);
    for (int k = 0; k <= 3; ++k)
        CHECK(std::abs(jr[k] - Complex(-1.0 / std::pow(2.0, k + 1))) < 1e-12);
}
