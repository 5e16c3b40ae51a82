#include "utf/holo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "utf/errors.hpp"
#include "utf/linalg.hpp"

namespace utf {

namespace detail {

struct ExprNode {
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt };
    Kind kind;
    Complex value{};     // Const
    int power = 0;       // Pow
    std::size_t offset;  // byte position, for error reporting
    std::shared_ptr<const ExprNode> a, b;
};

}  // namespace detail

using detail::ExprNode;
using Node = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

namespace {

Node make_node(Kind k, std::size_t offset, Node a = nullptr, Node b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->offset = offset;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    Node run() {
        Node e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    Node expr() {
        Node lhs = term();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c != '+' && c != '-') return lhs;
            const std::size_t at = pos_++;
            Node rhs = term();
            Node n = make_node(c == '+' ? Kind::Add : Kind::Sub, at, lhs, rhs);
            lhs = n;
        }
    }

    Node term() {
        Node lhs = factor();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c != '*' && c != '/') return lhs;
            const std::size_t at = pos_++;
            Node rhs = factor();
            Node n = make_node(c == '*' ? Kind::Mul : Kind::Div, at, lhs, rhs);
            lhs = n;
        }
    }

    Node factor() {
        Node b = base();
        skip_ws();
        if (peek() != '^') return b;
        const std::size_t at = pos_++;
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("expected integer exponent after '^'", pos_);
        long k = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            k = k * 10 + (peek() - '0');
            if (k > 999) throw ParseError("exponent too large (limit 999)", pos_);
            ++pos_;
        }
        Node n = make_node(Kind::Pow, at, b);
        const_cast<ExprNode*>(n.get())->power = static_cast<int>(neg ? -k : k);
        return n;
    }

    Node base() {
        skip_ws();
        const std::size_t at = pos_;
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Node e = expr();
            skip_ws();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError("expected a number, 'z', a function call, or '('", at);
    }

    Node number() {
        const std::size_t at = pos_;
        std::size_t digits = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
            ++digits;
        }
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
                ++digits;
            }
        }
        if (digits == 0) throw ParseError("malformed number", at);
        // exponent, only when unambiguous (digit or sign+digit follows the 'e')
        if (peek() == 'e' || peek() == 'E') {
            std::size_t look = pos_ + 1;
            if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
            if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
                pos_ = look;
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(s_.data() + at, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_)
            throw ParseError("malformed number", at);
        bool imag = false;
        if (peek() == 'i') {
            imag = true;
            ++pos_;
        }
        Node n = make_node(Kind::Const, at);
        const_cast<ExprNode*>(n.get())->value = imag ? Complex(0.0, v) : Complex(v, 0.0);
        return n;
    }

    Node identifier() {
        const std::size_t at = pos_;
        std::string name;
        while (std::isalpha(static_cast<unsigned char>(peek()))) name.push_back(s_[pos_++]);
        if (name == "z") return make_node(Kind::Var, at);
        Kind k;
        if (name == "exp")
            k = Kind::Exp;
        else if (name == "log")
            k = Kind::Log;
        else if (name == "sqrt")
            k = Kind::Sqrt;
        else
            throw ParseError("unknown identifier '" + name + "'", at);
        skip_ws();
        if (peek() != '(') throw ParseError("expected '(' after '" + name + "'", pos_);
        ++pos_;
        Node arg = expr();
        skip_ws();
        if (peek() != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
        return make_node(k, at, arg);
    }
};

// ---------------------------------------------------------------------------
// polynomial skeletons (ascending coefficients; empty vector = the zero
// polynomial) for locating singularities symbolically
// ---------------------------------------------------------------------------

using Poly = std::vector<Complex>;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == Complex(0.0, 0.0)) p.pop_back();
    return p;
}

Poly poly_add(const Poly& a, const Poly& b, double sign) {
    Poly out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    return trim(std::move(out));
}

constexpr std::size_t kMaxPolyDegree = 4096;

std::optional<Poly> poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return Poly{};
    if (a.size() + b.size() - 1 > kMaxPolyDegree + 1) return std::nullopt;
    Poly out(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return trim(std::move(out));
}

// Roots of a polynomial of degree >= 1 as eigenvalues of its companion
// matrix, sorted for determinism.  Degrees beyond 64 are not attempted.
std::optional<std::vector<Complex>> poly_roots(const Poly& p) {
    const int deg = static_cast<int>(p.size()) - 1;
    if (deg > 64) return std::nullopt;
    if (deg < 1) return std::vector<Complex>{};
    Matrix c(deg);
    for (int i = 0; i + 1 < deg; ++i) c(i + 1, i) = 1.0;
    for (int i = 0; i < deg; ++i) c(i, deg - 1) = -p[static_cast<std::size_t>(i)] / p.back();
    std::vector<Complex> roots = eigenvalues(c);
    std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

// Walks the tree once, collecting located poles, branch points, and the
// cannot-locate flag; returns the polynomial skeleton when the subtree is
// (identically equal to) a polynomial.  Constant subtrees fold so that e.g.
// 1/exp(2) and sqrt(4)*z stay fully analyzable.
struct Analysis {
    std::vector<Complex>& poles;
    std::vector<Complex>& branch_points;
    bool& unlocated;

    std::optional<Poly> walk(const Node& n) {
        switch (n->kind) {
            case Kind::Const:
                if (n->value == Complex(0.0, 0.0)) return Poly{};
                return Poly{n->value};
            case Kind::Var:
                return Poly{Complex(0.0, 0.0), Complex(1.0, 0.0)};
            case Kind::Add:
            case Kind::Sub: {
                auto pa = walk(n->a);
                auto pb = walk(n->b);
                if (pa && pb) return poly_add(*pa, *pb, n->kind == Kind::Add ? 1.0 : -1.0);
                return std::nullopt;
            }
            case Kind::Mul: {
                auto pa = walk(n->a);
                auto pb = walk(n->b);
                if (pa && pb) return poly_mul(*pa, *pb);
                return std::nullopt;
            }
            case Kind::Div: {
                auto pa = walk(n->a);
                auto pb = walk(n->b);
                if (!pb) {
                    unlocated = true;
                    return std::nullopt;
                }
                if (pb->empty())
                    throw DivisionByZeroConstant("division by an identically zero denominator",
                                                 n->offset);
                if (pb->size() == 1) {  // constant nonzero denominator
                    if (!pa) return std::nullopt;
                    Poly out = *pa;
                    for (Complex& c : out) c /= (*pb)[0];
                    return out;
                }
                add_roots(*pb, poles);
                return std::nullopt;
            }
            case Kind::Pow: {
                auto pa = walk(n->a);
                if (n->power == 0) return Poly{Complex(1.0, 0.0)};
                if (n->power > 0) {
                    if (!pa) return std::nullopt;
                    return poly_pow(*pa, n->power);
                }
                // negative power: reciprocal of base^{-k}
                if (!pa) {
                    unlocated = true;
                    return std::nullopt;
                }
                if (pa->empty())
                    throw DivisionByZeroConstant(
                        "negative power of an identically zero expression", n->offset);
                if (pa->size() == 1) {
                    Complex c(1.0, 0.0);
                    for (int i = 0; i < -n->power; ++i) c /= (*pa)[0];
                    return Poly{c};
                }
                add_roots(*pa, poles);
                return std::nullopt;
            }
            case Kind::Exp: {
                auto pa = walk(n->a);
                if (pa && pa->size() <= 1)
                    return Poly{std::exp(pa->empty() ? Complex(0.0, 0.0) : (*pa)[0])};
                return std::nullopt;
            }
            case Kind::Log:
            case Kind::Sqrt: {
                auto pa = walk(n->a);
                const char* fname = n->kind == Kind::Log ? "log" : "sqrt";
                if (pa) {
                    if (pa->empty())
                        throw ParseError(std::string("argument of ") + fname +
                                             " is identically zero",
                                         n->offset);
                    if (pa->size() == 1) {
                        const Complex c = (*pa)[0];
                        return Poly{n->kind == Kind::Log ? std::log(c) : std::sqrt(c)};
                    }
                    add_roots(*pa, branch_points);
                    return std::nullopt;
                }
                unlocated = true;
                return std::nullopt;
            }
        }
        return std::nullopt;  // unreachable
    }

  private:
    std::optional<Poly> poly_pow(const Poly& base, int k) {
        Poly acc{Complex(1.0, 0.0)};
        Poly sq = base;
        while (k > 0) {
            if (k & 1) {
                auto m = poly_mul(acc, sq);
                if (!m) return std::nullopt;
                acc = std::move(*m);
            }
            k >>= 1;
            if (k) {
                auto m = poly_mul(sq, sq);
                if (!m) return std::nullopt;
                sq = std::move(*m);
            }
        }
        return acc;
    }

    void add_roots(const Poly& p, std::vector<Complex>& into) {
        auto roots = poly_roots(p);
        if (!roots) {
            unlocated = true;
            return;
        }
        into.insert(into.end(), roots->begin(), roots->end());
    }
};

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

Complex bin_pow(Complex z, int k) {
    Complex acc(1.0, 0.0);
    while (k > 0) {
        if (k & 1) acc *= z;
        z *= z;
        k >>= 1;
    }
    return acc;
}

void require_finite(Complex v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw SingularityHit(std::string(what) + " produced a non-finite value");
}

Complex eval_node(const Node& n, Complex z) {
    switch (n->kind) {
        case Kind::Const:
            return n->value;
        case Kind::Var:
            return z;
        case Kind::Add:
            return eval_node(n->a, z) + eval_node(n->b, z);
        case Kind::Sub:
            return eval_node(n->a, z) - eval_node(n->b, z);
        case Kind::Mul: {
            const Complex v = eval_node(n->a, z) * eval_node(n->b, z);
            require_finite(v, "multiplication");
            return v;
        }
        case Kind::Div: {
            const Complex den = eval_node(n->b, z);
            if (den == Complex(0.0, 0.0)) throw SingularityHit("division by zero");
            const Complex v = eval_node(n->a, z) / den;
            require_finite(v, "division");
            return v;
        }
        case Kind::Pow: {
            const Complex b = eval_node(n->a, z);
            if (n->power >= 0) {
                const Complex v = bin_pow(b, n->power);
                require_finite(v, "power");
                return v;
            }
            const Complex w = bin_pow(b, -n->power);
            if (w == Complex(0.0, 0.0)) throw SingularityHit("negative power of zero");
            const Complex v = Complex(1.0, 0.0) / w;
            require_finite(v, "power");
            return v;
        }
        case Kind::Exp: {
            const Complex v = std::exp(eval_node(n->a, z));
            require_finite(v, "exp");
            return v;
        }
        case Kind::Log: {
            const Complex a = eval_node(n->a, z);
            if (a == Complex(0.0, 0.0)) throw SingularityHit("log of zero");
            return std::log(a);
        }
        case Kind::Sqrt:
            return std::sqrt(eval_node(n->a, z));
    }
    return Complex(0.0, 0.0);  // unreachable
}

// ---------------------------------------------------------------------------
// truncated Taylor series arithmetic (jets)
// ---------------------------------------------------------------------------

using Jet = std::vector<Complex>;  // coefficients 0..deg

Jet jet_const(Complex c, int deg) {
    Jet j(static_cast<std::size_t>(deg) + 1, Complex(0.0, 0.0));
    j[0] = c;
    return j;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    const std::size_t m = a.size();
    Jet out(m, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] == Complex(0.0, 0.0)) continue;
        for (std::size_t j = 0; i + j < m; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Jet jet_div(const Jet& a, const Jet& b) {
    if (b[0] == Complex(0.0, 0.0))
        throw SingularityHit("Taylor expansion at a zero of a denominator");
    const std::size_t m = a.size();
    Jet q(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < m; ++k) {
        Complex s = a[k];
        for (std::size_t j = 0; j < k; ++j) s -= q[j] * b[k - j];
        q[k] = s / b[0];
    }
    return q;
}

Jet jet_exp(const Jet& a) {
    const std::size_t m = a.size();
    Jet e(m, Complex(0.0, 0.0));
    e[0] = std::exp(a[0]);
    for (std::size_t k = 1; k < m; ++k) {
        Complex s(0.0, 0.0);
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
        e[k] = s / static_cast<double>(k);
    }
    return e;
}

Jet jet_log(const Jet& a) {
    if (a[0] == Complex(0.0, 0.0)) throw SingularityHit("Taylor expansion of log at a zero");
    const std::size_t m = a.size();
    Jet l(m, Complex(0.0, 0.0));
    l[0] = std::log(a[0]);
    for (std::size_t k = 1; k < m; ++k) {
        Complex s = static_cast<double>(k) * a[k];
        for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * a[k - j];
        l[k] = s / (static_cast<double>(k) * a[0]);
    }
    return l;
}

Jet jet_sqrt(const Jet& a) {
    if (a[0] == Complex(0.0, 0.0)) throw SingularityHit("Taylor expansion of sqrt at a zero");
    const std::size_t m = a.size();
    Jet s(m, Complex(0.0, 0.0));
    s[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < m; ++k) {
        Complex acc = a[k];
        for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (2.0 * s[0]);
    }
    return s;
}

Jet jet_pow(const Jet& base, int k, int deg) {
    Jet acc = jet_const(Complex(1.0, 0.0), deg);
    Jet sq = base;
    int e = std::abs(k);
    while (e > 0) {
        if (e & 1) acc = jet_mul(acc, sq);
        e >>= 1;
        if (e) sq = jet_mul(sq, sq);
    }
    if (k < 0) acc = jet_div(jet_const(Complex(1.0, 0.0), deg), acc);
    return acc;
}

Jet jet_node(const Node& n, Complex center, int deg) {
    switch (n->kind) {
        case Kind::Const:
            return jet_const(n->value, deg);
        case Kind::Var: {
            Jet j = jet_const(center, deg);
            if (deg >= 1) j[1] = Complex(1.0, 0.0);
            return j;
        }
        case Kind::Add: {
            Jet a = jet_node(n->a, center, deg);
            const Jet b = jet_node(n->b, center, deg);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        }
        case Kind::Sub: {
            Jet a = jet_node(n->a, center, deg);
            const Jet b = jet_node(n->b, center, deg);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
            return a;
        }
        case Kind::Mul:
            return jet_mul(jet_node(n->a, center, deg), jet_node(n->b, center, deg));
        case Kind::Div:
            return jet_div(jet_node(n->a, center, deg), jet_node(n->b, center, deg));
        case Kind::Pow: {
            if (n->power == 0) return jet_const(Complex(1.0, 0.0), deg);
            return jet_pow(jet_node(n->a, center, deg), n->power, deg);
        }
        case Kind::Exp:
            return jet_exp(jet_node(n->a, center, deg));
        case Kind::Log:
            return jet_log(jet_node(n->a, center, deg));
        case Kind::Sqrt:
            return jet_sqrt(jet_node(n->a, center, deg));
    }
    return {};  // unreachable
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_literal(Complex v) {
    if (v.imag() == 0.0) return fmt_double(v.real());
    if (v.real() == 0.0) return fmt_double(v.imag()) + "i";
    // cannot arise from a single literal; printed as a sum for safety
    return "(" + fmt_double(v.real()) + " + " + fmt_double(v.imag()) + "i)";
}

std::string print_node(const Node& n) {
    switch (n->kind) {
        case Kind::Const:
            return fmt_literal(n->value);
        case Kind::Var:
            return "z";
        case Kind::Add:
            return "(" + print_node(n->a) + " + " + print_node(n->b) + ")";
        case Kind::Sub:
            return "(" + print_node(n->a) + " - " + print_node(n->b) + ")";
        case Kind::Mul:
            return "(" + print_node(n->a) + " * " + print_node(n->b) + ")";
        case Kind::Div:
            return "(" + print_node(n->a) + " / " + print_node(n->b) + ")";
        case Kind::Pow: {
            const Kind bk = n->a->kind;
            const bool atomic = bk == Kind::Const || bk == Kind::Var || bk == Kind::Exp ||
                                bk == Kind::Log || bk == Kind::Sqrt;
            const std::string b = print_node(n->a);
            return (atomic ? b : "(" + b + ")") + "^" + std::to_string(n->power);
        }
        case Kind::Exp:
            return "exp(" + print_node(n->a) + ")";
        case Kind::Log:
            return "log(" + print_node(n->a) + ")";
        case Kind::Sqrt:
            return "sqrt(" + print_node(n->a) + ")";
    }
    return {};  // unreachable
}

bool nodes_equal(const Node& x, const Node& y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Kind::Const:
            return x->value == y->value;
        case Kind::Var:
            return true;
        case Kind::Pow:
            return x->power == y->power && nodes_equal(x->a, y->a);
        case Kind::Exp:
        case Kind::Log:
        case Kind::Sqrt:
            return nodes_equal(x->a, y->a);
        default:
            return nodes_equal(x->a, y->a) && nodes_equal(x->b, y->b);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// HoloFunction
// ---------------------------------------------------------------------------

HoloFunction parse(const std::string& source) {
    HoloFunction h;
    h.source_ = source;
    h.ast_ = Parser(source).run();
    std::optional<std::vector<Complex>> poly;
    {
        Analysis a{h.poles_, h.branch_points_, h.has_unlocated_};
        poly = a.walk(h.ast_);
    }
    if (poly) {
        if (poly->empty()) poly->push_back(Complex(0.0, 0.0));
        h.poly_ = std::move(*poly);
    }
    auto by_re_im = [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::sort(h.poles_.begin(), h.poles_.end(), by_re_im);
    std::sort(h.branch_points_.begin(), h.branch_points_.end(), by_re_im);
    return h;
}

std::string HoloFunction::printed() const { return print_node(ast_); }

bool HoloFunction::same_tree(const HoloFunction& other) const {
    return nodes_equal(ast_, other.ast_);
}

Complex HoloFunction::eval(Complex z) const {
    const Complex v = eval_node(ast_, z);
    require_finite(v, "evaluation");
    return v;
}

std::vector<Complex> HoloFunction::taylor_jet(Complex center, int degree) const {
    if (degree < 0) throw InvalidInput("taylor_jet needs degree >= 0");
    Jet j = jet_node(ast_, center, degree);
    for (Complex c : j) require_finite(c, "Taylor coefficient");
    return j;
}

const std::vector<Complex>& HoloFunction::poly_coeffs() const {
    if (!poly_) throw InvalidInput("expression is not a polynomial");
    return *poly_;
}

double ray_distance(Complex branch_point, Complex z) {
    if (z.real() >= branch_point.real()) return std::abs(z - branch_point);
    return std::abs(z.imag() - branch_point.imag());
}

double HoloFunction::distance_to_singularity(Complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (Complex p : poles_) d = std::min(d, std::abs(z - p));
    for (Complex p : branch_points_) d = std::min(d, ray_distance(p, z));
    return d;
}

}  // namespace utf
