#include <cmath>
#include <limits>

#include "doctest.h"
#include "ringsim/errors.hpp"
#include "ringsim/model.hpp"
#include "ringsim/observables.hpp"
#include "ringsim/oracles.hpp"
#include "ringsim/pipeline.hpp"

using namespace ringsim;

namespace {

// 1 - g sum_q 1/(E - 2 q^2), summed directly with a tail estimate.
double closure_residual(double g, double e) {
    double s = 1.0 / e;
    const int q_max = 200000;
    for (int q = 1; q <= q_max; ++q) s += 2.0 / (e - 2.0 * double(q) * double(q));
    s -= 1.0 / q_max;  // sum_{q > Q} 2/(-2 q^2)
    return 1.0 - g * s;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("two-particle energy solves the closure relation") {
    for (double g : {0.01, 0.3, 1.0, 7.0, 100.0}) {
        const double e = two_particle_exact(g);
        CHECK(std::abs(closure_residual(g, e)) < 1e-5);
    }
}

TEST_CASE("two-particle limits and monotonicity") {
    CHECK(two_particle_exact(1e-8) == doctest::Approx(1e-8).epsilon(1e-6));
    CHECK(two_particle_exact(std::numeric_limits<double>::infinity()) == 0.5);
    CHECK(two_particle_exact(1e8) == doctest::Approx(0.5).epsilon(1e-7));
    double prev = 0.0;
    for (double g = 1e-4; g < 1e5; g *= 1.5) {
        const double e = two_particle_exact(g);
        CHECK(e > prev);
        CHECK(e < 0.5);
        prev = e;
    }
    CHECK_THROWS_AS(two_particle_exact(0.0), InvalidArgument);
}

TEST_CASE("Bethe ansatz for two atoms equals the two-particle oracle") {
    for (double g = 1e-3; g <= 1e3; g *= 3.1) {
        CHECK(std::abs(bethe_ground_energy(2, g).energy - two_particle_exact(g)) < 1e-9);
    }
}

TEST_CASE("Bethe ground state structure") {
    const auto s = bethe_ground_energy(5, 2.0);
    REQUIRE(s.quasi_momenta.size() == 5);
    for (int j = 0; j < 5; ++j) CHECK(s.quasi_momenta[j] == doctest::Approx(-s.quasi_momenta[4 - j]).epsilon(1e-12));
    CHECK(s.residual < 1e-10);
    double e = 0.0;
    for (double k : s.quasi_momenta) e += k * k;
    CHECK(s.energy == doctest::Approx(e));
}

TEST_CASE("Bethe limits") {
    CHECK(bethe_ground_energy(5, 1e9).energy == doctest::Approx(10.0).epsilon(1e-7));
    CHECK(bethe_ground_energy(3, 1e9).energy == doctest::Approx(2.0).epsilon(1e-7));
    for (int n = 2; n <= 9; ++n) {
        const double g = 1e-7;
        CHECK(bethe_ground_energy(n, g).energy == doctest::Approx(g * n * (n - 1) / 2.0).epsilon(1e-5));
    }
    CHECK_THROWS_AS(bethe_ground_energy(1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(bethe_ground_energy(10, 1.0), InvalidArgument);
    CHECK_THROWS_AS(bethe_ground_energy(3, 0.0), InvalidArgument);
}

TEST_CASE("rescaled diagonalization approaches the Bethe energy as the window grows") {
    for (int n : {3, 4}) {
        const double g = 2.0;
        const double exact = bethe_ground_energy(n, g).energy;
        double prev = 1e300;
        for (int r : {6, 8, 10, 12}) {
            const auto s = solve_point(RingModel(n, r), SystemParams(n, r, g, 0.0, 0.0));
            const double err = std::abs(s.solution.eigenvalues[0] - exact);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev / exact < 2e-2);
    }
}

TEST_CASE("truncation validation at weak coupling is nearly exact") {
    const auto a = truncation_validation(1e-4, 20);
    const auto b = truncation_validation(1e-6, 20);
    CHECK(b.rescaled_error < 1e-8);
    CHECK(b.unscaled_error < 1e-6);
    // bare-coupling error vanishes linearly in g
    CHECK(b.unscaled_error < 0.02 * a.unscaled_error);
}

TEST_CASE("rescaling beats bare coupling and converges with r") {
    double prev = 1.0;
    for (int r : {8, 12, 16, 20}) {
        const auto rep = truncation_validation(1.0, r);
        CHECK(rep.rescaled_error < prev);
        CHECK(rep.unscaled_error > 5.0 * rep.rescaled_error);
        prev = rep.rescaled_error;
    }
}

TEST_CASE("binomial distribution") {
    const auto one = binomial_PK(1);
    CHECK(one(0) == 0.5);
    CHECK(one(1) == 0.5);
    const auto p = binomial_PK(5);
    CHECK(p(0) == doctest::Approx(1.0 / 32));
    CHECK(p(1) == doctest::Approx(5.0 / 32));
    CHECK(p(2) == doctest::Approx(10.0 / 32));
    CHECK(p(3) == doctest::Approx(10.0 / 32));
    CHECK(p(4) == doctest::Approx(5.0 / 32));
    CHECK(p(5) == doctest::Approx(1.0 / 32));
    CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(binomial_PK(0), InvalidArgument);
}

}
