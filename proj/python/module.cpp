#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "utf/calculus.hpp"
#include "utf/decomp.hpp"
#include "utf/errors.hpp"
#include "utf/generators.hpp"
#include "utf/holo.hpp"
#include "utf/json_io.hpp"
#include "utf/linalg.hpp"
#include "utf/rng.hpp"
#include "utf/tracial.hpp"
#include "utf/verify.hpp"

namespace py = pybind11;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

utf::Matrix to_matrix(const CArray& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
        throw utf::InvalidInput("expected a square 2-D array");
    const int n = static_cast<int>(arr.shape(0));
    std::vector<utf::Complex> entries(arr.data(), arr.data() + static_cast<std::size_t>(n) * n);
    return utf::Matrix(n, std::move(entries));
}

py::array_t<std::complex<double>> from_matrix(const utf::Matrix& m) {
    const int n = m.dim();
    py::array_t<std::complex<double>> arr({n, n});
    std::copy(m.entries().begin(), m.entries().end(), arr.mutable_data());
    return arr;
}

utf::OrderingTag order_from_name(const std::string& name) {
    if (name == "modulus") return utf::OrderingTag::modulus_then_argument();
    if (name == "real") return utf::OrderingTag::real_then_imag();
    throw utf::InvalidInput("unknown ordering '" + name + "' (expected modulus or real)");
}

py::dict dict_from_json(const nlohmann::json& j) {
    const py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

}  // namespace

PYBIND11_MODULE(_utforms, m) {
    m.doc() = "upper triangular forms: T = N + Q with N normal carrying the spectral "
              "distribution of T and Q nilpotent, plus holomorphic functional calculus";

    py::register_exception<utf::Error>(m, "Error");

    m.def(
        "decompose",
        [](const CArray& t, const std::string& order) {
            const utf::Decomposition d = utf::decompose(to_matrix(t), order_from_name(order));
            py::dict out;
            out["N"] = from_matrix(d.n_part);
            out["Q"] = from_matrix(d.q_part);
            out["basis"] = from_matrix(d.flag.basis);
            out["cuts"] = d.flag.cuts;
            out["order"] = d.order.name();
            return out;
        },
        py::arg("t"), py::arg("order") = "modulus",
        "Split T = N + Q along the ordered Schur flag; N is normal with the eigenvalue "
        "multiset of T and Q is strictly upper triangular in the flag basis.");

    m.def(
        "multiplicative_form",
        [](const CArray& t, const std::string& order) {
            return from_matrix(
                utf::multiplicative_form(utf::decompose(to_matrix(t), order_from_name(order))));
        },
        py::arg("t"), py::arg("order") = "modulus",
        "X = N^{-1} Q with T = N (I + X); raises Error when N is nearly singular.");

    m.def(
        "calc",
        [](const CArray& t, const std::string& fn, const std::string& method, int nodes) {
            const utf::Matrix mt = to_matrix(t);
            const utf::HoloFunction h = utf::parse(fn);
            if (method == "schur") return from_matrix(utf::calc_triangular(mt, h));
            if (method == "contour")
                return from_matrix(
                    utf::calc_contour(mt, h, utf::auto_contour(utf::eigenvalues(mt), h, nodes)));
            throw utf::InvalidInput("unknown method '" + method +
                                    "' (expected schur or contour)");
        },
        py::arg("t"), py::arg("fn"), py::arg("method") = "schur", py::arg("nodes") = 256,
        "Apply a holomorphic function given as source text, e.g. \"exp(z)/(z-3)\".");

    m.def(
        "eigenvalues",
        [](const CArray& t) { return utf::eigenvalues(to_matrix(t)); }, py::arg("t"),
        "Eigenvalues ordered by modulus then argument.");

    m.def(
        "brown",
        [](const CArray& t) {
            const utf::BrownMeasure mu = utf::brown_measure(to_matrix(t));
            py::list atoms;
            for (const utf::BrownAtom& a : mu.atoms) {
                py::dict d;
                d["location"] = a.location;
                d["num"] = a.num;
                d["den"] = a.den;
                atoms.append(d);
            }
            return atoms;
        },
        py::arg("t"), "Atomic spectral distribution: eigenvalues with rational weights.");

    m.def(
        "fk_determinant", [](const CArray& t) { return utf::fk_determinant(to_matrix(t)); },
        py::arg("t"), "|det T|^{1/n}, zero when T is singular to working precision.");

    m.def(
        "fn_eval",
        [](const std::string& fn, std::complex<double> z) { return utf::parse(fn).eval(z); },
        py::arg("fn"), py::arg("z"), "Evaluate function source at a point.");

    m.def(
        "generate",
        [](const std::string& kind, int n, std::uint64_t seed) {
            utf::Rng rng(seed);
            return from_matrix(utf::generate(kind, n, rng));
        },
        py::arg("kind"), py::arg("n"), py::arg("seed") = 0,
        "Seeded instance: kind in {triangular, spectral, near-defective}.");

    m.def(
        "commuting_pair",
        [](int n, std::uint64_t seed) {
            utf::Rng rng(seed);
            const auto [nm, q] = utf::gen_commuting_pair(n, rng);
            return py::make_tuple(from_matrix(nm), from_matrix(q));
        },
        py::arg("n"), py::arg("seed") = 0,
        "(N, Q) with N normal, Q nilpotent and NQ = QN.");

    m.def(
        "verify",
        [](const CArray& t, const std::string& fn, std::uint64_t seed, double tol_scale,
           int workers) {
            utf::VerifyConfig cfg;
            cfg.seed = seed;
            cfg.tol_scale = tol_scale;
            cfg.workers = workers;
            const utf::VerificationReport rep =
                utf::run_suite(to_matrix(t), utf::parse(fn), cfg);
            return dict_from_json(utf::report_to_json(rep));
        },
        py::arg("t"), py::arg("fn") = "z^2", py::arg("seed") = 0, py::arg("tol_scale") = 1.0,
        py::arg("workers") = 1,
        "Run every identity check; returns the full report as a dict.");
}
