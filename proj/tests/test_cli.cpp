#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ringsim/cli.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/model.hpp"

using namespace ringsim;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ringsim-cli-test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("angle and species parsing") {
    CHECK(parse_angle("pi") == doctest::Approx(kPi));
    CHECK(parse_angle("0.9pi") == doctest::Approx(0.9 * kPi));
    CHECK(parse_angle("-pi/2") == doctest::Approx(-0.5 * kPi));
    CHECK(parse_angle("2pi") == doctest::Approx(2.0 * kPi));
    CHECK(parse_angle("1.25") == 1.25);
    CHECK_THROWS(parse_angle("banana"));
    CHECK(parse_species_mass("mass=7u") == doctest::Approx(7.0 * si::atomic_mass));
    CHECK(parse_species_mass("mass=1.2e-26kg") == doctest::Approx(1.2e-26));
    CHECK(parse_species_mass("Li7") == doctest::Approx(parse_species_mass("7Li")));
    CHECK_THROWS(parse_species_mass("mass=-1u"));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == kExitInvalid);
    CHECK(run({"frobnicate"}).code == kExitInvalid);
    CHECK(run({"sweep", "--points", "banana"}).code == kExitInvalid);
    CHECK(run({"sweep", "--modes", "7", "--dry-run"}).code == kExitInvalid);
    CHECK(run({"sweep", "--figure", "fig9"}).code == kExitInvalid);
}

TEST_CASE("errors can be reported as JSON") {
    const auto r = run({"sweep", "--modes", "7", "--error-json"});
    CHECK(r.code == kExitInvalid);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "invalid_arguments");
    CHECK(j["exit_code"] == kExitInvalid);
}

TEST_CASE("dimension cap exits with 4") {
    const auto r = run({"spectrum", "--atoms", "30", "--modes", "40", "--points", "1"});
    CHECK(r.code == kExitDimensionCap);
}

TEST_CASE("help and version") {
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"--help"}).out.find("sweep") != std::string::npos);
}

TEST_CASE("dry run prints a manifest and does no work") {
    const auto r = run({"sweep", "--figure", "fig3", "--dry-run"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["tool"] == kToolName);
    CHECK(j["command"] == "sweep");
    CHECK(j["digest"].get<std::string>().size() == 16);
    CHECK(j["config"].get<std::string>().find("sweep.") != std::string::npos);
}

TEST_CASE("global flags may follow the subcommand") {
    const auto a = run({"--dry-run", "sweep", "--from", "0.1", "--to", "1", "--points", "3"});
    const auto b = run({"sweep", "--from", "0.1", "--to", "1", "--points", "3", "--dry-run"});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    CHECK(nlohmann::json::parse(a.out)["digest"] == nlohmann::json::parse(b.out)["digest"]);
}

TEST_CASE("digest changes with the configuration") {
    const auto a = run({"sweep", "--from", "0.1", "--to", "1", "--points", "3", "--dry-run"});
    const auto b = run({"sweep", "--from", "0.1", "--to", "1", "--points", "4", "--dry-run"});
    CHECK(nlohmann::json::parse(a.out)["digest"] != nlohmann::json::parse(b.out)["digest"]);
}

TEST_CASE("a manifest replays to the same digest") {
    const auto first = run({"sweep", "--atoms", "3", "--modes", "8", "--from", "0.1", "--to", "2", "--points", "3",
                            "--b", "0.01", "--dry-run"});
    REQUIRE(first.code == kExitOk);
    const auto path = scratch("replay.manifest.json");
    std::ofstream(path) << first.out;
    const auto second = run({"--config", path.string(), "sweep", "--dry-run"});
    REQUIRE(second.code == kExitOk);
    const auto a = nlohmann::json::parse(first.out);
    const auto b = nlohmann::json::parse(second.out);
    CHECK(a["digest"] == b["digest"]);
    CHECK(a["config"] == b["config"]);
    CHECK(b["config_file"] == path.string());
}

TEST_CASE("INI configuration files are accepted") {
    const auto path = scratch("run.ini");
    std::ofstream(path) << "seed=7\n[sweep]\natoms=3\nmodes=8\nfrom=0.5\nto=0.5\npoints=1\n";
    const auto r = run({"--config", path.string(), "sweep", "--dry-run"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["seed"] == 7);
    CHECK(j["parameters"]["N"] == 3);
}

TEST_CASE("a small sweep writes CSV and a manifest beside it") {
    const auto csv = scratch("small.csv");
    std::filesystem::remove(csv);
    std::filesystem::remove(csv.string() + ".manifest.json");
    const auto r = run({"sweep", "--atoms", "3", "--modes", "8", "--from", "0.1", "--to", "10", "--grid", "log",
                        "--points", "3", "-o", csv.string()});
    REQUIRE(r.code == kExitOk);
    const auto text = slurp(csv);
    CHECK(text.find("param,gamma,g_tilde") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(csv.string() + ".manifest.json"));
    CHECK(text.find(manifest["digest"].get<std::string>()) != std::string::npos);
}

TEST_CASE("single-particle levels") {
    const auto r = run({"single-particle", "--b", "0.008", "--omega", "pi", "--levels", "3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("mu,alpha,energy") != std::string::npos);
    CHECK(r.out.find("\n0,0.5,0.25") != std::string::npos);
    CHECK(run({"single-particle", "--tg-atoms", "4"}).code == kExitInvalid);
    CHECK(run({"single-particle", "--tg-atoms", "4", "--allow-even"}).code == kExitOk);
}

TEST_CASE("noon table") {
    const auto r = run({"noon", "--atoms-from", "2", "--atoms-to", "4"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("N,g,chain_gap,closed_form") != std::string::npos);
    CHECK(r.out.find("\n4,") != std::string::npos);
}

TEST_CASE("units report") {
    const auto r = run({"units", "--atoms", "100", "--species", "mass=7u", "--radius", "50e-6", "--deltaE", "25"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["delta_e_over_hbar_per_s"].get<double>() == doctest::Approx(45.0).epsilon(0.02));
}

TEST_CASE("loss report") {
    const auto r = run({"loss", "--atoms", "3", "--modes", "8", "--g", "20"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("Qbar_loss"));
}

TEST_CASE("spectrum over a phase grid") {
    const auto r = run({"spectrum", "--atoms", "2", "--modes", "6", "--points", "3", "--levels", "2"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("omega,E0,E1") != std::string::npos);
}

TEST_CASE("self-test passes") {
    const auto r = run({"validate"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

}
