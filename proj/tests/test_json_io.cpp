#include <unistd.h>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "utf/decomp.hpp"
#include "utf/errors.hpp"
#include "utf/generators.hpp"
#include "utf/holo.hpp"
#include "utf/json_io.hpp"
#include "utf/rng.hpp"
#include "utf/tracial.hpp"
#include "utf/verify.hpp"

using utf::Complex;
using utf::Matrix;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("utf_json_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("matrix serialization is lossless, including awkward doubles") {
    utf::Rng rng(3);
    Matrix m = utf::gen_spectral(4, rng);
    m(0, 0) = Complex(0.1 + 0.2, -1.0 / 3.0);  // values without short decimal forms
    m(1, 2) = Complex(1e-300, 5e300);

    const Matrix back = utf::matrix_from_json(utf::matrix_to_json(m));
    CHECK(back.entries() == m.entries());  // bit-exact round trip

    const nlohmann::json j = utf::matrix_to_json(m);
    CHECK(j.at("n") == 4);
    CHECK(j.at("data").size() == 16);
    CHECK(j.at("data").at(0).size() == 2);
}

TEST_CASE("malformed matrix documents are rejected") {
    using nlohmann::json;
    CHECK_THROWS_AS(utf::matrix_from_json(json::parse(R"({"n":2,"data":[[1,0]]})")),
                    utf::InvalidInput);
    CHECK_THROWS_AS(utf::matrix_from_json(json::parse(R"({"n":0,"data":[]})")),
                    utf::InvalidInput);
    CHECK_THROWS_AS(utf::matrix_from_json(json::parse(
                        R"({"n":1,"data":[[1,null]]})")),
                    utf::InvalidInput);
    CHECK_THROWS_AS(utf::matrix_from_json(json::parse(R"({"data":[[1,0]]})")),
                    utf::InvalidInput);
    CHECK_THROWS_AS(utf::matrix_from_json(json::parse(R"([1,2,3])")), utf::InvalidInput);
}

TEST_CASE("decomposition round trip preserves all fields") {
    utf::Rng rng(5);
    const Matrix t = utf::gen_spectral(5, rng);
    const utf::Decomposition d = utf::decompose(t, utf::OrderingTag::modulus_then_argument());

    const utf::Decomposition back = utf::decomposition_from_json(utf::decomposition_to_json(d));
    CHECK(back.n_part.entries() == d.n_part.entries());
    CHECK(back.q_part.entries() == d.q_part.entries());
    CHECK(back.flag.basis.entries() == d.flag.basis.entries());
    CHECK(back.flag.cuts == d.flag.cuts);
    CHECK(back.order.name() == "modulus");

    nlohmann::json bad = utf::decomposition_to_json(d);
    bad["order"] = "alphabetical";
    CHECK_THROWS_AS(utf::decomposition_from_json(bad), utf::InvalidInput);
}

TEST_CASE("spectral measure serialization carries weights and the determinant") {
    const utf::BrownMeasure mu = utf::brown_measure(Matrix::diagonal({Complex(1.0), Complex(2.0)}));
    const nlohmann::json j = utf::brown_to_json(mu, std::sqrt(2.0));
    REQUIRE(j.at("atoms").size() == 2);
    CHECK(j.at("atoms").at(0).at("num") == 1);
    CHECK(j.at("atoms").at(0).at("den") == 2);
    CHECK(j.at("atoms").at(0).at("re").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("fk_determinant").get<double>() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("report serialization exposes the full check structure") {
    utf::Rng rng(8);
    const Matrix t = utf::gen_spectral(4, rng);
    utf::VerifyConfig cfg;
    cfg.seed = 99;
    const utf::VerificationReport rep = utf::run_suite(t, utf::parse("z^2"), cfg);
    const nlohmann::json j = utf::report_to_json(rep);

    CHECK(j.at("seed") == 99);
    CHECK(j.at("passed").is_boolean());
    CHECK(j.at("fingerprint").at("n") == 4);
    CHECK(j.at("fingerprint").at("hash").get<std::string>().size() == 16);
    REQUIRE(j.at("checks").is_array());
    REQUIRE(!j.at("checks").empty());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("name"));
        CHECK(c.contains("residuals"));
        CHECK(c.contains("allowances"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("passed"));
        CHECK(c.contains("skipped"));
    }
    CHECK(j.at("timings").size() == j.at("checks").size());
}

TEST_CASE("file writes are byte-stable and reads validate") {
    TempDir dir;
    utf::Rng rng(11);
    const Matrix m = utf::gen_triangular(3, rng);

    const std::string p1 = dir.file("a.json");
    const std::string p2 = dir.file("b.json");
    utf::write_matrix_file(p1, m);
    utf::write_matrix_file(p2, m);

    std::ifstream f1(p1), f2(p2);
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    CHECK(s1.back() == '\n');

    const Matrix back = utf::read_matrix_file(p1);
    CHECK(back.entries() == m.entries());

    const std::string broken = dir.file("broken.json");
    std::ofstream(broken) << "{ this is not json";
    CHECK_THROWS_AS(utf::read_matrix_file(broken), utf::InvalidInput);
    CHECK_THROWS_AS(utf::read_matrix_file(dir.file("missing.json")), utf::InvalidInput);
}

TEST_CASE("matrix hashes separate distinct matrices") {
    const std::string h1 = utf::matrix_hash(Matrix::identity(2));
    const std::string h2 = utf::matrix_hash(Matrix::diagonal({Complex(1.0), Complex(1.0 + 1e-15)}));
    CHECK(h1.size() == 16);
    CHECK(h1 != h2);
    CHECK(utf::matrix_hash(Matrix::identity(2)) == h1);
}
