#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
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

namespace {

using nlohmann::json;
using namespace utf;

// exit codes: 0 success, 1 verification failures, 2 bad input, 3 numerical
// breakdown
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
    if (seed_opt->count() > 0) return seed_flag;
    if (const char* env = std::getenv("UTF_SEED")) {
        try {
            std::size_t pos = 0;
            const std::string s(env);
            const std::uint64_t v = std::stoull(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InvalidInput(std::string("UTF_SEED is not a valid unsigned integer: '") +
                               std::getenv("UTF_SEED") + "'");
        }
    }
    return seed_flag;
}

OrderingTag order_from_name(const std::string& name) {
    if (name == "modulus") return OrderingTag::modulus_then_argument();
    if (name == "real") return OrderingTag::real_then_imag();
    throw InvalidInput("unknown ordering '" + name + "' (expected modulus or real)");
}

// spectral radius witnessed on the flag basis diagonal: reliable for the
// nilpotent part even at sizes where ambient eigenvalues scatter
double witnessed_radius(const Matrix& q, const Matrix& basis) {
    const Matrix c = basis.adjoint() * q * basis;
    double rad = 0.0;
    for (int i = 0; i < c.dim(); ++i) rad = std::max(rad, std::abs(c(i, i)));
    return rad;
}

std::string sibling_path(const std::string& base, const std::string& tag) {
    const std::size_t dot = base.rfind('.');
    const std::size_t slash = base.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + "-" + tag + ".json";
    return base.substr(0, dot) + "-" + tag + base.substr(dot);
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed, std::string out) {
    if (n < 2) throw InvalidInput("gen needs --n at least 2");
    if (out.empty()) out = kind + "-n" + std::to_string(n) + "-s" + std::to_string(seed) + ".json";
    Rng rng(seed);
    json written = json::array();
    if (kind == "commuting-pair") {
        const auto [nm, q] = gen_commuting_pair(n, rng);
        const std::string n_path = sibling_path(out, "n");
        const std::string q_path = sibling_path(out, "q");
        write_matrix_file(n_path, nm);
        write_matrix_file(q_path, q);
        written.push_back(n_path);
        written.push_back(q_path);
    } else {
        const Matrix t = generate(kind, n, rng);
        write_matrix_file(out, t);
        written.push_back(out);
    }
    emit(json{{"written", std::move(written)}});
    return 0;
}

int cmd_decompose(const std::string& in, const std::string& order_name, std::string out) {
    const Matrix t = read_matrix_file(in);
    const Decomposition d = decompose(t, order_from_name(order_name));
    if (out.empty()) out = sibling_path(in, "decomposition");
    write_json_file(out, decomposition_to_json(d));
    const BrownMeasure mu = brown_measure(t);
    emit(json{{"written", json::array({out})},
              {"q_norm", d.q_part.frobenius_norm()},
              {"q_spectral_radius", witnessed_radius(d.q_part, d.flag.basis)},
              {"brown_atoms", mu.atoms.size()}});
    return 0;
}

int cmd_calc(const std::string& in, const std::string& fn, const std::string& method, int nodes,
             std::string out) {
    const Matrix t = read_matrix_file(in);
    const HoloFunction h = parse(fn);
    json summary{{"method", method}};
    Matrix result(t.dim());
    if (method == "schur") {
        result = calc_triangular(t, h);
    } else if (method == "contour") {
        result = calc_contour(t, h, auto_contour(eigenvalues(t), h, nodes));
    } else {  // both
        const Matrix a = calc_triangular(t, h);
        const Matrix b = calc_contour(t, h, auto_contour(eigenvalues(t), h, nodes));
        result = a;
        summary["cross_residual"] =
            (a - b).frobenius_norm() / std::max(1.0, a.frobenius_norm());
    }
    if (out.empty()) out = sibling_path(in, "fn");
    write_matrix_file(out, result);
    summary["written"] = json::array({out});
    emit(summary);
    return 0;
}

int cmd_verify(const std::string& in, const std::string& fn, std::uint64_t seed,
               std::string report_path, double tol_scale, int workers) {
    const Matrix t = read_matrix_file(in);
    const HoloFunction h = parse(fn);
    VerifyConfig cfg;
    cfg.seed = seed;
    cfg.tol_scale = tol_scale;
    cfg.workers = workers;
    const VerificationReport rep = run_suite(t, h, cfg);
    if (report_path.empty()) report_path = sibling_path(in, "report");
    write_json_file(report_path, report_to_json(rep));
    std::size_t failures = 0;
    std::size_t skipped = 0;
    for (const CheckResult& c : rep.checks) {
        if (c.skipped)
            ++skipped;
        else if (!c.passed)
            ++failures;
    }
    emit(json{{"passed", rep.all_passed},
              {"checks", rep.checks.size()},
              {"failures", failures},
              {"skipped", skipped},
              {"written", json::array({report_path})}});
    return rep.all_passed ? 0 : 1;
}

int cmd_brown(const std::string& in) {
    const Matrix t = read_matrix_file(in);
    emit(brown_to_json(brown_measure(t), fk_determinant(t)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"upper triangular decomposition toolkit: T = N + Q with N normal carrying the "
                 "spectral distribution of T and Q nilpotent, plus holomorphic functional "
                 "calculus and identity verification"};
    app.require_subcommand(1);
    double tol_scale = 1.0;
    app.add_option("--tol-scale", tol_scale, "multiply every verification tolerance")
        ->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("gen", "generate a seeded test matrix file");
    std::string gen_kind;
    int gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("kind", gen_kind, "instance family")
        ->required()
        ->check(CLI::IsMember({"triangular", "spectral", "commuting-pair", "near-defective"}));
    gen->add_option("--n", gen_n, "dimension (at least 2)")->required();
    auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "generator seed (or UTF_SEED)");
    gen->add_option("--out", gen_out, "output path (commuting-pair appends -n/-q)");

    auto* dec = app.add_subcommand("decompose", "split T = N + Q along the ordered Schur flag");
    std::string dec_in, dec_order = "modulus", dec_out;
    dec->add_option("in", dec_in, "matrix file")->required();
    dec->add_option("--order", dec_order, "eigenvalue ordering")
        ->check(CLI::IsMember({"modulus", "real"}));
    dec->add_option("--out", dec_out, "decomposition output path");

    auto* calc = app.add_subcommand("calc", "apply a holomorphic function to a matrix");
    std::string calc_in, calc_fn, calc_method = "both", calc_out;
    int calc_nodes = 256;
    calc->add_option("in", calc_in, "matrix file")->required();
    calc->add_option("--fn", calc_fn, "function source, e.g. \"exp(z)/(z-3)\"")->required();
    calc->add_option("--method", calc_method, "evaluation engine")
        ->check(CLI::IsMember({"contour", "schur", "both"}));
    calc->add_option("--nodes", calc_nodes, "quadrature nodes per circle")
        ->check(CLI::Range(16, 1 << 20));
    calc->add_option("--out", calc_out, "result output path");

    auto* ver = app.add_subcommand("verify", "run every identity check and write a report");
    std::string ver_in, ver_fn = "z^2", ver_report;
    std::uint64_t ver_seed = 0;
    int ver_workers = 1;
    ver->add_option("in", ver_in, "matrix file")->required();
    ver->add_option("--fn", ver_fn, "function source for the calculus checks");
    auto* ver_seed_opt = ver->add_option("--seed", ver_seed, "suite seed (or UTF_SEED)");
    ver->add_option("--out", ver_report, "report output path");
    ver->add_option("--workers", ver_workers, "concurrent checks")->check(CLI::Range(1, 64));

    auto* brown = app.add_subcommand("brown", "print the spectral distribution and determinant");
    std::string brown_in;
    brown->add_option("in", brown_in, "matrix file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_kind, gen_n, resolve_seed(gen_seed_opt, gen_seed),
                                          gen_out);
        if (dec->parsed()) return cmd_decompose(dec_in, dec_order, dec_out);
        if (calc->parsed()) return cmd_calc(calc_in, calc_fn, calc_method, calc_nodes, calc_out);
        if (ver->parsed())
            return cmd_verify(ver_in, ver_fn, resolve_seed(ver_seed_opt, ver_seed), ver_report,
                              tol_scale, ver_workers);
        if (brown->parsed()) return cmd_brown(brown_in);
    } catch (const NonConvergence& e) {
        std::cerr << "numerical breakdown: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const SingularResolvent& e) {
        std::cerr << "numerical breakdown: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const SingularityHit& e) {
        std::cerr << "numerical breakdown: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
