#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "utf/matrix.hpp"

namespace utf {

namespace detail {
struct ExprNode;
}

// A parsed analytic expression in one variable z over
//   {complex literals, +, -, *, /, ^ integer, exp, log, sqrt},
// together with everything the contour and triangular calculi need to know
// about where it stops being analytic: located poles (roots of polynomial
// denominators), branch points of log/sqrt with principal-branch cuts (the
// horizontal ray running left from the branch point), and a flag for
// singularities that cannot be located symbolically (non-polynomial
// denominators or function arguments).
class HoloFunction {
  public:
    const std::string& source() const { return source_; }

    // Canonical fully-parenthesized form; parsing it reproduces the tree.
    std::string printed() const;
    bool same_tree(const HoloFunction& other) const;

    Complex eval(Complex z) const;  // throws SingularityHit when not finite

    // Coefficients c_0..c_degree of the Taylor expansion about `center`.
    std::vector<Complex> taylor_jet(Complex center, int degree) const;

    bool is_polynomial() const { return poly_.has_value(); }
    const std::vector<Complex>& poly_coeffs() const;  // ascending; requires is_polynomial

    const std::vector<Complex>& poles() const { return poles_; }
    const std::vector<Complex>& branch_points() const { return branch_points_; }
    bool has_unlocated_singularities() const { return has_unlocated_; }

    // Distance from z to the nearest located pole or branch ray; +inf if none.
    double distance_to_singularity(Complex z) const;

  private:
    friend HoloFunction parse(const std::string& source);
    HoloFunction() = default;

    std::shared_ptr<const detail::ExprNode> ast_;
    std::string source_;
    std::optional<std::vector<Complex>> poly_;  // present iff expression is polynomial
    std::vector<Complex> poles_;
    std::vector<Complex> branch_points_;
    bool has_unlocated_ = false;
};

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' int)?            -- int may be negative
//   base   := number | 'z' | func '(' expr ')' | '(' expr ')'
//   func   := 'exp' | 'log' | 'sqrt'
// Numbers accept a decimal point, an exponent, and an 'i' suffix for
// imaginary literals (e.g. "2i", "1.5e-3i").  There is no unary minus and no
// bare 'i'; write "0 - z" and "1i".
HoloFunction parse(const std::string& source);

// Distance from z to the principal-branch cut {p + t : t <= 0}.
double ray_distance(Complex branch_point, Complex z);

}  // namespace utf
