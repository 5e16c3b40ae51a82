#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "utf/json_io.hpp"
#include "utf/matrix.hpp"

using nlohmann::json;
using utf::Complex;
using utf::Matrix;

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

class Scratch {
  public:
    Scratch() {
        dir_ = fs::temp_directory_path() / ("utf_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    const fs::path& dir() const { return dir_; }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Runs the tool with the scratch directory as working directory.  `env`
    // is a shell prefix such as "UTF_SEED=5 ".
    CliRun run(const std::string& args, const std::string& env = "") const {
        const fs::path out = dir_ / "_stdout";
        const fs::path err = dir_ / "_stderr";
        const std::string cmd = "cd '" + dir_.string() + "' && " + env + "'" + UTF_CLI_PATH +
                                "' " + args + " > '" + out.string() + "' 2> '" + err.string() +
                                "'";
        const int status = std::system(cmd.c_str());
        CliRun r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

  private:
    fs::path dir_;
};

}  // namespace

TEST_CASE("gen writes reproducible instances and reports the files") {
    Scratch s;
    const CliRun a = s.run("gen triangular --n 2 --seed 0 --out a.json");
    REQUIRE(a.exit_code == 0);
    const json summary = json::parse(a.out);
    REQUIRE(summary.contains("written"));
    CHECK(summary.at("written").at(0) == "a.json");

    const CliRun b = s.run("gen triangular --n 2 --seed 0 --out b.json");
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(s.path("a.json")) == slurp(s.path("b.json")));

    const Matrix m = utf::read_matrix_file(s.path("a.json"));
    CHECK(m.dim() == 2);

    // Different seed, different bytes.
    s.run("gen triangular --n 2 --seed 1 --out c.json");
    CHECK(slurp(s.path("a.json")) != slurp(s.path("c.json")));

    // Default output name encodes kind, size, and seed.
    const CliRun d = s.run("gen spectral --n 4 --seed 7");
    REQUIRE(d.exit_code == 0);
    CHECK(fs::exists(s.dir() / "spectral-n4-s7.json"));
}

TEST_CASE("gen: environment seed applies only when the flag is absent") {
    Scratch s;
    REQUIRE(s.run("gen triangular --n 3 --seed 5 --out flag.json").exit_code == 0);
    REQUIRE(s.run("gen triangular --n 3 --out env.json", "UTF_SEED=5 ").exit_code == 0);
    CHECK(slurp(s.path("flag.json")) == slurp(s.path("env.json")));

    REQUIRE(s.run("gen triangular --n 3 --seed 6 --out both.json", "UTF_SEED=5 ").exit_code == 0);
    CHECK(slurp(s.path("both.json")) != slurp(s.path("flag.json")));

    CHECK(s.run("gen triangular --n 3 --out bad.json", "UTF_SEED=notanumber ").exit_code == 2);
}

TEST_CASE("gen rejects bad arguments") {
    Scratch s;
    CHECK(s.run("gen triangular --n 1 --seed 0").exit_code == 2);
    CHECK(s.run("gen mystery --n 4 --seed 0").exit_code == 2);
    CHECK(s.run("frobnicate").exit_code == 2);
}

TEST_CASE("gen commuting-pair writes the two factors") {
    Scratch s;
    const CliRun r = s.run("gen commuting-pair --n 4 --seed 3 --out pair.json");
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(r.out);
    CHECK(summary.at("written").size() == 2);
    CHECK(fs::exists(s.dir() / "pair-n.json"));
    CHECK(fs::exists(s.dir() / "pair-q.json"));
}

TEST_CASE("decompose emits the split and a machine summary") {
    Scratch s;
    utf::write_matrix_file(s.path("t.json"),
                           Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}}));
    const CliRun r = s.run("decompose t.json --out d.json");
    REQUIRE(r.exit_code == 0);

    const json summary = json::parse(r.out);
    CHECK(summary.at("q_norm").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(summary.at("q_spectral_radius").get<double>() < 1e-10);
    CHECK(summary.at("brown_atoms") == 2);

    const json d = utf::read_json_file(s.path("d.json"));
    const Matrix n = utf::matrix_from_json(d.at("N"));
    const Matrix q = utf::matrix_from_json(d.at("Q"));
    CHECK(std::abs(n(0, 0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(n(1, 1) - Complex(2.0)) < 1e-12);
    CHECK(std::abs(q(0, 1) - Complex(1.0)) < 1e-12);
    CHECK(d.at("order") == "modulus");

    // A normal input reports a vanishing triangular part.
    utf::write_matrix_file(s.path("nrm.json"),
                           Matrix::diagonal({Complex(2.0), Complex(0.0, 1.0)}));
    const CliRun rn = s.run("decompose nrm.json --out dn.json");
    REQUIRE(rn.exit_code == 0);
    CHECK(json::parse(rn.out).at("q_norm").get<double>() < 1e-9);

    // Nilpotent input: the normal part is zero.
    utf::write_matrix_file(s.path("nil.json"),
                           Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
    const CliRun rq = s.run("decompose nil.json --out dq.json");
    REQUIRE(rq.exit_code == 0);
    const Matrix n0 = utf::matrix_from_json(utf::read_json_file(s.path("dq.json")).at("N"));
    CHECK(n0.frobenius_norm() < 1e-12);

    CHECK(s.run("decompose missing.json --out x.json").exit_code == 2);

    std::ofstream(s.path("garbage.json")) << "{ nope";
    CHECK(s.run("decompose garbage.json --out x.json").exit_code == 2);
}

TEST_CASE("calc applies functions through either engine") {
    Scratch s;
    utf::write_matrix_file(s.path("t.json"),
                           Matrix::from_rows({{1.0, 1.0}, {0.0, 2.0}}));

    const CliRun r = s.run("calc t.json --fn \"z^2\" --out sq.json");
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(r.out);
    CHECK(summary.at("method") == "both");
    CHECK(summary.at("cross_residual").get<double>() < 1e-9);
    const Matrix sq = utf::read_matrix_file(s.path("sq.json"));
    CHECK(std::abs(sq(0, 0) - Complex(1.0)) < 1e-10);
    CHECK(std::abs(sq(0, 1) - Complex(3.0)) < 1e-10);
    CHECK(std::abs(sq(1, 1) - Complex(4.0)) < 1e-10);

    // Constant one gives the identity.
    const CliRun rid = s.run("calc t.json --fn \"z^0\" --method schur --out id.json");
    REQUIRE(rid.exit_code == 0);
    const Matrix id = utf::read_matrix_file(s.path("id.json"));
    CHECK(std::abs(id(0, 0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(id(0, 1)) < 1e-12);

    // Scalar resolvent values on a diagonal input.
    utf::write_matrix_file(s.path("diag.json"),
                           Matrix::diagonal({Complex(1.0), Complex(2.0)}));
    const CliRun rres = s.run("calc diag.json --fn \"1/(z-3)\" --out res.json");
    REQUIRE(rres.exit_code == 0);
    const Matrix res = utf::read_matrix_file(s.path("res.json"));
    CHECK(std::abs(res(0, 0) - Complex(-0.5)) < 1e-9);
    CHECK(std::abs(res(1, 1) - Complex(-1.0)) < 1e-9);

    // Parse failure is an input error; a pole on the spectrum is numeric.
    CHECK(s.run("calc t.json --fn \"z+\" --out x.json").exit_code == 2);
    CHECK(s.run("calc t.json --fn \"1/(z-1)\" --method schur --out x.json").exit_code == 3);
    CHECK(s.run("calc t.json --fn \"z^2\" --nodes 4 --out x.json").exit_code == 2);
}

TEST_CASE("verify writes a report and communicates pass or fail in the exit code") {
    Scratch s;
    REQUIRE(s.run("gen spectral --n 4 --seed 11 --out t.json").exit_code == 0);

    const CliRun r = s.run("verify t.json --fn \"z^2\" --seed 9 --out rep.json");
    REQUIRE(r.exit_code == 0);
    const json summary = json::parse(r.out);
    CHECK(summary.at("passed").get<bool>());
    CHECK(summary.at("failures") == 0);
    CHECK(summary.at("checks").get<int>() > 0);

    const json rep = utf::read_json_file(s.path("rep.json"));
    CHECK(rep.at("passed").get<bool>());
    CHECK(rep.at("seed") == 9);

    // Identical runs give identical reports up to timings, across workers.
    REQUIRE(s.run("verify t.json --fn \"z^2\" --seed 9 --workers 3 --out rep2.json").exit_code ==
            0);
    json r1 = utf::read_json_file(s.path("rep.json"));
    json r2 = utf::read_json_file(s.path("rep2.json"));
    r1.erase("timings");
    r2.erase("timings");
    CHECK(r1.dump() == r2.dump());

    CHECK(s.run("verify nothere.json --out x.json").exit_code == 2);
}

TEST_CASE("brown prints the measure and the determinant to stdout") {
    Scratch s;
    utf::write_matrix_file(s.path("diag.json"),
                           Matrix::diagonal({Complex(1.0), Complex(2.0)}));
    const CliRun r = s.run("brown diag.json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("atoms").size() == 2);
    CHECK(j.at("atoms").at(0).at("num") == 1);
    CHECK(j.at("atoms").at(0).at("den") == 2);
    CHECK(j.at("fk_determinant").get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    utf::write_matrix_file(s.path("nil.json"),
                           Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
    const json jn = json::parse(s.run("brown nil.json").out);
    REQUIRE(jn.at("atoms").size() == 1);
    CHECK(jn.at("atoms").at(0).at("num") == 2);
    CHECK(jn.at("fk_determinant").get<double>() == 0.0);

    utf::write_matrix_file(s.path("u.json"),
                           Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(json::parse(s.run("brown u.json").out).at("fk_determinant").get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stdout stays machine-readable and diagnostics go to stderr") {
    Scratch s;
    const CliRun bad = s.run("decompose missing.json --out x.json");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.empty());
    CHECK(!bad.err.empty());

    const CliRun good = s.run("gen triangular --n 2 --seed 0 --out ok.json");
    const json parsed = json::parse(good.out);
    CHECK(parsed.is_object());
}

TEST_CASE("tolerance scaling flag reaches the verification suite") {
    Scratch s;
    REQUIRE(s.run("gen spectral --n 4 --seed 2 --out t.json").exit_code == 0);
    const CliRun r = s.run("--tol-scale 10 verify t.json --fn \"z^2\" --seed 4 --out rep.json");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out).at("passed").get<bool>());
}
