#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "ringsim/errors.hpp"
#include "ringsim/format.hpp"
#include "ringsim/observables.hpp"
#include "ringsim/pipeline.hpp"
#include "ringsim/sweep.hpp"

using namespace ringsim;

namespace {

SweepSpec small_sweep() {
    SweepSpec s;
    s.base = SystemParams(3, 8, 0.0, 0.01, kPi);
    s.grid = Grid{GridKind::logarithmic, 0.01, 100.0, 7};
    return s;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("sweep-engine") {

TEST_CASE("grids") {
    const auto lin = Grid{GridKind::linear, 1.0, 2.0, 5}.values();
    CHECK(lin == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
    const auto lg = Grid{GridKind::logarithmic, 1e-2, 1e2, 5}.values();
    CHECK(lg.front() == 1e-2);
    CHECK(lg.back() == 1e2);
    CHECK(lg[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Grid{GridKind::linear, 3.0, 3.0, 1}.values() == std::vector<double>{3.0});
    CHECK_THROWS_AS(Grid({GridKind::linear, 1.0, 1.0, 3}).values(), InvalidArgument);
    CHECK_THROWS_AS(Grid({GridKind::logarithmic, 0.0, 1.0, 3}).values(), InvalidArgument);
    CHECK_THROWS_AS(Grid({GridKind::linear, 0.0, 1.0, 0}).values(), InvalidArgument);
}

TEST_CASE("parameter names") {
    CHECK(parse_sweep_parameter("g") == SweepParameter::interaction);
    CHECK(parse_sweep_parameter("omega") == SweepParameter::phase);
    CHECK(parse_sweep_parameter("N") == SweepParameter::atoms);
    CHECK(parse_grid_kind("log") == GridKind::logarithmic);
    CHECK_THROWS_AS(parse_sweep_parameter("temperature"), InvalidArgument);
}

TEST_CASE("held gamma fixes g per atom number") {
    SweepSpec s = small_sweep();
    s.parameter = SweepParameter::atoms;
    s.hold_gamma = 4.0;
    s.modes_for_atoms = {{4, 6}};
    const auto p = s.point(4);
    CHECK(p.n_atoms() == 4);
    CHECK(p.n_modes() == 6);
    CHECK(lieb_liniger_gamma(p) == doctest::Approx(4.0));
}

TEST_CASE("a one-point sweep equals a direct solve") {
    SweepSpec s = small_sweep();
    s.grid = Grid{GridKind::linear, 0.7, 0.7, 1};
    const auto rec = run_sweep(s);
    REQUIRE(rec.size() == 1);
    const auto direct = level_splitting(s.point(0.7));
    CHECK(rec[0].delta_e == doctest::Approx(direct).epsilon(1e-9));
    CHECK(rec[0].g_tilde == doctest::Approx(rescale_interaction(0.7, 8).g_tilde));
    CHECK(rec[0].gamma == doctest::Approx(lieb_liniger_gamma(3, 0.7)));
    CHECK(std::isnan(rec[0].qbar_loss));
    CHECK(rec[0].ok);
}

TEST_CASE("records come back in grid order and are deterministic") {
    const auto s = small_sweep();
    const auto a = run_sweep(s);
    const auto b = run_sweep(s);
    const auto grid = s.grid.values();
    REQUIRE(a.size() == grid.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].param == grid[i]);
        CHECK(a[i].delta_e == b[i].delta_e);
        CHECK(a[i].iterations == b[i].iterations);
        CHECK(a[i].quality == doctest::Approx(4.0 * a[i].p_k1 * a[i].p_k2));
    }
}

TEST_CASE("thread pool results do not depend on the number of workers") {
    auto s = small_sweep();
    s.warm_start = false;
    s.threads = 1;
    const auto one = run_sweep(s);
    s.threads = 4;
    const auto four = run_sweep(s);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].param == four[i].param);
        CHECK(one[i].delta_e == four[i].delta_e);
        CHECK(one[i].p_k1 == four[i].p_k1);
    }
}

TEST_CASE("warm start agrees with cold solves") {
    auto s = small_sweep();
    const auto warm = run_sweep(s);
    s.warm_start = false;
    const auto cold = run_sweep(s);
    for (std::size_t i = 0; i < warm.size(); ++i) CHECK(warm[i].delta_e == doctest::Approx(cold[i].delta_e).epsilon(1e-7));
}

TEST_CASE("point cache round-trips bit-exactly") {
    const auto dir = fresh_dir("ringsim-sweep-cache-test");
    auto s = small_sweep();
    s.cache_dir = dir.string();
    const auto first = run_sweep(s);
    const auto second = run_sweep(s);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK_FALSE(first[i].cached);
        CHECK(second[i].cached);
        CHECK(first[i].delta_e == second[i].delta_e);
        CHECK(first[i].e0 == second[i].e0);
        CHECK(first[i].p_k2 == second[i].p_k2);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("loss quality column") {
    auto s = small_sweep();
    s.grid = Grid{GridKind::linear, 50.0, 50.0, 1};
    s.loss = true;
    const auto rec = run_sweep(s);
    CHECK(rec[0].qbar_loss >= 0.0);
    CHECK(rec[0].qbar_loss <= 1.0);
}

TEST_CASE("invalid grid points are rejected before any work") {
    auto s = small_sweep();
    s.parameter = SweepParameter::modes;
    s.grid = Grid{GridKind::linear, 6.0, 7.0, 2};
    CHECK_THROWS_AS(run_sweep(s), InvalidArgument);
}

TEST_CASE("solver failures are recorded without aborting the sweep") {
    auto s = small_sweep();
    s.grid = Grid{GridKind::linear, 0.5, 1.0, 2};
    s.solver.force_iterative = true;
    s.solver.max_matvecs = 4;
    const auto rec = run_sweep(s);
    REQUIRE(rec.size() == 2);
    for (const auto& r : rec) {
        CHECK_FALSE(r.ok);
        CHECK(std::isnan(r.delta_e));
        CHECK_FALSE(r.error.empty());
    }
}

TEST_CASE("CSV header and columns") {
    auto s = small_sweep();
    s.grid = Grid{GridKind::linear, 0.5, 1.0, 2};
    const auto csv = sweep_csv(s, run_sweep(s), "0123456789abcdef");
    CHECK(csv.find("# manifest 0123456789abcdef") != std::string::npos);
    CHECK(csv.find("param,gamma,g_tilde,E0_level,E1_level,deltaE,P0,PN,Q,Qbar_loss,iters,residual") !=
          std::string::npos);
}

TEST_CASE("formatting helpers") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(std::nan("")) == "nan");
    CHECK(digest_hex("").size() == 16);
    CHECK(digest_hex("") == "cbf29ce484222325");
    CHECK(digest_hex("a") != digest_hex("b"));
}

}
