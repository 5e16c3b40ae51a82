#include "utf/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "utf/errors.hpp"
#include "utf/rng.hpp"

namespace utf {

using nlohmann::json;

nlohmann::json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (const Complex& z : m.entries()) data.push_back(json::array({z.real(), z.imag()}));
    return json{{"n", m.dim()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object() || !j.contains("n") || !j.contains("data"))
            throw InvalidInput("matrix document needs fields \"n\" and \"data\"");
        if (!j["n"].is_number_integer()) throw InvalidInput("matrix field \"n\" must be an integer");
        const int n = j["n"].get<int>();
        if (n < 1) throw InvalidInput("matrix dimension must be positive");
        const json& data = j["data"];
        if (!data.is_array() || data.size() != static_cast<std::size_t>(n) * n)
            throw InvalidInput("matrix field \"data\" must hold n*n [re, im] pairs");
        std::vector<Complex> entries;
        entries.reserve(data.size());
        for (const json& e : data) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw InvalidInput("matrix entries must be [re, im] number pairs");
            const double re = e[0].get<double>();
            const double im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw InvalidInput("matrix entries must be finite");
            entries.emplace_back(re, im);
        }
        return Matrix(n, std::move(entries));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed matrix document: ") + e.what());
    }
}

nlohmann::json flag_to_json(const Flag& f) {
    return json{{"basis", matrix_to_json(f.basis)}, {"cuts", f.cuts}};
}

Flag flag_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object() || !j.contains("basis") || !j.contains("cuts"))
            throw InvalidInput("flag document needs fields \"basis\" and \"cuts\"");
        Matrix basis = matrix_from_json(j["basis"]);
        std::vector<int> cuts = j["cuts"].get<std::vector<int>>();
        return make_flag(std::move(basis), std::move(cuts));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed flag document: ") + e.what());
    }
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
    return json{{"N", matrix_to_json(d.n_part)},
                {"Q", matrix_to_json(d.q_part)},
                {"flag", flag_to_json(d.flag)},
                {"order", d.order.name()}};
}

Decomposition decomposition_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object() || !j.contains("N") || !j.contains("Q") || !j.contains("flag") ||
            !j.contains("order"))
            throw InvalidInput("decomposition document needs \"N\", \"Q\", \"flag\", \"order\"");
        const std::string order_name = j["order"].get<std::string>();
        OrderingTag order = OrderingTag::modulus_then_argument();
        if (order_name == "real")
            order = OrderingTag::real_then_imag();
        else if (order_name != "modulus")
            throw InvalidInput("unknown ordering \"" + order_name + "\" (expected modulus or real)");
        return Decomposition{matrix_from_json(j["N"]), matrix_from_json(j["Q"]),
                             flag_from_json(j["flag"]), std::move(order)};
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed decomposition document: ") + e.what());
    }
}

nlohmann::json brown_to_json(const BrownMeasure& mu, double fk) {
    json atoms = json::array();
    for (const BrownAtom& a : mu.atoms)
        atoms.push_back(json{{"re", a.location.real()},
                             {"im", a.location.imag()},
                             {"num", a.num},
                             {"den", a.den}});
    return json{{"atoms", std::move(atoms)}, {"fk_determinant", fk}};
}

nlohmann::json report_to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const CheckResult& c : r.checks) {
        json residuals = json::object();
        json allowances = json::object();
        for (const ResidualEntry& e : c.residuals) {
            residuals[e.name] = e.value;
            allowances[e.name] = e.allowance;
        }
        checks.push_back(json{{"name", c.name},
                              {"residuals", std::move(residuals)},
                              {"allowances", std::move(allowances)},
                              {"tolerance", c.tolerance},
                              {"passed", c.passed},
                              {"skipped", c.skipped},
                              {"details", c.details}});
    }
    json timings = json::object();
    for (const auto& [name, seconds] : r.timings) timings[name] = seconds;
    return json{{"fingerprint",
                 json{{"n", r.fingerprint.n}, {"norm", r.fingerprint.norm},
                      {"hash", r.fingerprint.hash}}},
                {"seed", r.seed},
                {"checks", std::move(checks)},
                {"passed", r.all_passed},
                {"timings", std::move(timings)}};
}

std::string matrix_hash(const Matrix& m) {
    const std::string dump = matrix_to_json(m).dump();
    const std::uint64_t h = fnv1a64(dump);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }
}

Matrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

void write_matrix_file(const std::string& path, const Matrix& m) {
    write_json_file(path, matrix_to_json(m));
}

}  // namespace utf
