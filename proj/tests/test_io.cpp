#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "novtel/io.hpp"

using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = novtel::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "novtel_io_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string write_json(const std::string& name, const io::json& j) {
    return write_file(name, j.dump(2));
}

Ray shift_ray() {
    Ray r = Ray::unit();
    r.tail.phi = ChainMap::scalar(r.prefix[0], sc("T"));
    r.tail.kind = TailKind::PositiveShift;
    r.tail.delta = rat(1);
    return r;
}

io::json standard_neck_json() {
    io::json j;
    j["alpha"] = "1/2";
    j["s"] = "2";
    j["eps"] = "1/10";
    j["delta"] = "1/100";
    j["c"] = "1/1000";
    j["K"] = "10";
    j["reeb_periods"] = {"1", "2"};
    return j;
}

}  // namespace

TEST_CASE("serialization round trips") {
    Rng rng(131);
    for (int it = 0; it < 10; ++it) {
        const auto s = rng.scalar(3);
        CHECK(io::scalar_from_json(io::json(s.str()), "t") == s);
    }
    CHECK(io::rational_from_json(io::rational_to_json(rat(-7, 3)), "t") == rat(-7, 3));
    CHECK(io::rational_from_json(io::json(5), "t") == rat(5));

    for (int it = 0; it < 8; ++it) {
        // zero blocks are normalized away on output, so compare canonical forms
        GradedComplex c = pair_complex(2, 2, rng.matrix(2, 2));
        const auto cj = io::complex_to_json(c);
        CHECK(io::complex_to_json(io::complex_from_json(cj)) == cj);
        for (int n : {0, 1}) CHECK(io::complex_from_json(cj).d(n) == c.d(n));

        const Ray r = random_ray(rng, it % 2 == 0);
        const auto rj = io::ray_to_json(r);
        const Ray back = io::ray_from_json(rj);
        CHECK(io::ray_to_json(back) == rj);
        CHECK(back.tail.kind == r.tail.kind);
        CHECK(back.tail.delta == r.tail.delta);
        for (int n : {0, 1}) CHECK(back.tail.phi.block(n) == r.tail.phi.block(n));
        CHECK_NOTHROW(back.validate());

        const auto m = RayMorphism::identity(r);
        const auto mj = io::morphism_to_json(m);
        const auto mb = io::morphism_from_json(mj, r, r);
        CHECK(io::morphism_to_json(mb) == mj);
        CHECK(mb.strict == m.strict);
        CHECK_NOTHROW(mb.validate());
    }

    // malformed input names the offending field
    CHECK_THROWS_AS(io::complex_from_json(io::json{{"grading", "Q"}}), ValidationError);
    io::json bad = io::complex_to_json(two_term("T"));
    bad["differential"][0]["matrix"][0][0] = "T^(";
    CHECK_THROWS_WITH_AS(io::complex_from_json(bad), doctest::Contains("differential@0"),
                         ValidationError);
}

TEST_CASE("cli: homology and tel-homology") {
    const auto cpath = write_json("bar.json", io::complex_to_json(two_term("T^(1/2)")));
    auto r = run_cli({"homology", cpath});
    CHECK(r.code == 0);
    const auto j = io::json::parse(r.out);
    CHECK(j.at("degrees").size() == 1);
    CHECK(j.at("degrees").at(0).at("degree") == 1);
    CHECK(j.at("degrees").at(0).at("torsion") == io::json{"1/2"});

    const auto upath = write_json("u_ray.json", io::ray_to_json(Ray::unit()));
    r = run_cli({"tel-homology", upath, "--lambda", "2"});
    CHECK(r.code == 0);
    const auto jb = io::json::parse(r.out);
    CHECK(jb.at("precision") == "2");
    CHECK(jb.at("degrees").at(0).at("free") == 1);

    // deterministic byte-identical output
    const auto again = run_cli({"tel-homology", upath, "--lambda", "2"});
    CHECK(again.out == r.out);
    CHECK(again.code == 0);

    // text rendering
    const auto txt = run_cli({"--format", "text", "tel-homology", upath, "--lambda", "2"});
    CHECK(txt.code == 0);
    CHECK(txt.out.find("precision: 2") != std::string::npos);
}

TEST_CASE("cli: validate and visibility") {
    const auto upath = write_json("u_ray2.json", io::ray_to_json(Ray::unit()));
    auto r = run_cli({"validate", upath});
    CHECK(r.code == 0);
    CHECK(io::json::parse(r.out).at("kind") == "ray");

    GradedComplex bad;
    bad.set_generators(0, {"x"});
    bad.set_generators(1, {"y"});
    bad.set_generators(2, {"z"});
    bad.set_differential(0, mat(1, 1, {"1"}));
    bad.set_differential(1, mat(1, 1, {"T"}));
    const auto bpath = write_json("bad.json", io::complex_to_json(bad));
    r = run_cli({"validate", bpath});
    CHECK(r.code == 1);
    CHECK(r.err.find("invalid: d^2 != 0") != std::string::npos);

    const auto spath = write_json("shift.json", io::ray_to_json(shift_ray()));
    r = run_cli({"visibility", spath, "--schedule", "1,5"});
    CHECK(r.code == 0);
    const auto j = io::json::parse(r.out);
    CHECK(j.at("verdict") == "certified-invisible");
    CHECK(j.at("visible_at") == io::json{false, false});

    r = run_cli({"visibility", spath, "--schedule", "5,1"});
    CHECK(r.code == 1);

    r = run_cli({"validate", (workdir() / "missing.json").string()});
    CHECK(r.code == 1);
}

TEST_CASE("cli: unit-check") {
    const auto upath = write_json("u_ray3.json", io::ray_to_json(Ray::unit()));
    const auto good = write_json("unit.json", io::json{{"u", {{"1"}}}, {"p", io::json::array()}});
    auto r = run_cli({"unit-check", upath, good});
    CHECK(r.code == 0);

    const auto barpath = write_json("bar_ray.json", io::ray_to_json(Ray::constant(two_term("T"))));
    r = run_cli({"unit-check", barpath, good});
    CHECK(r.code == 1);
    CHECK(r.err.find("invalid:") != std::string::npos);
}

TEST_CASE("cli: neck-check and ellipsoid") {
    const auto npath = write_json("neck.json", standard_neck_json());
    auto r = run_cli({"neck-check", npath, "--bound", "1"});
    CHECK(r.code == 0);
    auto j = io::json::parse(r.out);
    CHECK(j.at("admissible") == true);
    CHECK(j.at("bounds_ok") == true);
    CHECK(j.at("stilde") == "21/11");
    CHECK(j.at("end_inner") == "-109/10000");

    auto bad = standard_neck_json();
    bad["s"] = "1";
    r = run_cli({"neck-check", write_json("neck_bad.json", bad)});
    CHECK(r.code == 1);
    CHECK(r.err.find("s > 1") != std::string::npos);

    r = run_cli({"ellipsoid", "--a", "1", "--cap", "3"});
    CHECK(r.code == 0);
    j = io::json::parse(r.out);
    CHECK(j.at("orbits").size() == 3);
    CHECK(j.at("orbits").at(2).at("cz") == 6);
    CHECK(j.at("degenerate") == false);

    r = run_cli({"ellipsoid", "--a", "1", "--a", "1", "--cap", "2"});
    CHECK(io::json::parse(r.out).at("degenerate") == true);
}

TEST_CASE("cli: phi-apply and the completion probe") {
    io::json neck = standard_neck_json();
    neck["orbits"] = {
        {"u", {{"kind", "nonconstant"}, {"r", "1"}, {"period", "2"}, {"cz", 3}}}};
    const auto spath = write_json("orbit_ray.json", io::ray_to_json(shift_ray()));

    auto r = run_cli({"phi-apply", spath, write_json("neck_orb.json", neck)});
    CHECK(r.code == 0);
    CHECK(io::json::parse(r.out).contains("ray"));

    io::json probe;
    probe["bound_a"] = "2";
    probe["lambdas"] = {"1", "10"};
    neck["probe"] = probe;
    r = run_cli({"phi-apply", spath, write_json("neck_probe.json", neck)});
    CHECK(r.code == 0);
    CHECK(io::json::parse(r.out).at("extends") == true);

    // unbounded index stream: the resolved class grows between the caps
    io::json o5 = {{"kind", "nonconstant"}, {"r", "1"}, {"period", "1"}, {"cz", 5}};
    neck["probe"]["cap1"] = "4";
    neck["probe"]["at_cap1"] = io::json::array({o5});
    neck["probe"]["at_cap2"] = io::json::array({o5, o5, o5});
    r = run_cli({"phi-apply", spath, write_json("neck_unbounded.json", neck)});
    CHECK(r.code == 2);
    CHECK(r.err.find("unsupported: unbounded index class 5") != std::string::npos);
}

TEST_CASE("cli: resource caps") {
    const auto upath = write_json("u_ray4.json", io::ray_to_json(Ray::unit()));
    auto r = run_cli({"oracle", upath, "--M", "5", "--lambda", "2", "--max-rank", "3"});
    CHECK(r.code == 3);
    CHECK(r.err.find("resource cap: telescope rank") != std::string::npos);

    setenv("NOVTEL_MAX_RANK", "3", 1);
    r = run_cli({"oracle", upath, "--M", "5", "--lambda", "2"});
    unsetenv("NOVTEL_MAX_RANK");
    CHECK(r.code == 3);

    r = run_cli({"oracle", upath, "--M", "3", "--lambda", "2"});
    CHECK(r.code == 0);
    CHECK(io::json::parse(r.out).at("degrees").at(0).at("free") == 1);
}

TEST_CASE("cli: help and argument errors") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"no-such-command"}).code == 1);
    CHECK(run_cli({}).code == 1);
}
